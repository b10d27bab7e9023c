use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;

use super::KernelSpec;
use crate::ansatz::CircuitSpec;
use crate::bas::TargetDistribution;
use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::rng::{purpose, stream};
use crate::sim::{output_probabilities, sample_histogram, Histogram};

/// Squared MMD between the sampled `q` and the exact target `p`. The
/// `q`-`q` term is the unbiased U-statistic over distinct sample pairs.
pub fn mmd_loss(q: &Histogram, p: &TargetDistribution, spec: &KernelSpec) -> Result<f64> {
    let n = q.n_shots();
    if n < 2 {
        return Err(Error::TooFewShots(n));
    }
    check_dims(q.counts().len(), p, spec)?;
    let counts: Vec<f64> = q.counts().iter().map(|&c| c as f64).collect();
    let diag: f64 = counts.iter().enumerate().map(|(x, c)| c * spec.get(x, x)).sum();
    let nf = n as f64;
    let qq = (spec.expect(&counts, &counts) - diag) / (nf * (nf - 1.0));
    let empirical = q.empirical();
    Ok(qq - 2.0 * spec.expect(&empirical, p.probs()) + spec.expect(p.probs(), p.probs()))
}

/// Squared MMD between two exact distributions, `(q - p)^T K (q - p)`.
pub fn mmd_loss_exact(q: &[f64], p: &TargetDistribution, spec: &KernelSpec) -> f64 {
    let diff: Vec<f64> = q.iter().zip(p.probs()).map(|(a, b)| a - b).collect();
    spec.expect(&diff, &diff)
}

fn check_dims(len: usize, p: &TargetDistribution, spec: &KernelSpec) -> Result<()> {
    if len != p.probs().len() || len != spec.dim() {
        return Err(Error::Dimension(format!(
            "distribution over {len} states, target over {}, kernel over {}",
            p.probs().len(),
            spec.dim()
        )));
    }
    Ok(())
}

/// How the output distributions entering the gradient are obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GradientMode {
    Exact,
    /// Independent `shots`-sample histograms for `q`, `q+` and `q-`; the
    /// streams are keyed by `(seed, step, parameter, sign)`.
    Sampled {
        shots: u64,
        seed: u64,
        step: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MmdGradient {
    pub grad: Vec<f64>,
    /// Loss at the unshifted parameters: the U-statistic estimate in sampled
    /// mode, the exact value otherwise.
    pub loss: f64,
}

/// Parameter-shift gradient of the squared MMD:
/// `grad_i = <K>_{q+,q} - <K>_{q-,q} - <K>_{q+,p} + <K>_{q-,p}` with `q+-`
/// the output at `theta_i +- pi/2`.
pub fn mmd_gradient(
    circuit: &CircuitSpec,
    theta: &[f64],
    p: &TargetDistribution,
    spec: &KernelSpec,
    mode: GradientMode,
    noise: Option<&NoiseModel>,
) -> Result<MmdGradient> {
    circuit.check_parameters(theta)?;
    let base_probs = output_probabilities(circuit, theta, noise)?;
    check_dims(base_probs.as_slice().len(), p, spec)?;

    let (base, loss) = match mode {
        GradientMode::Exact => {
            let q = base_probs.into_vec();
            let loss = mmd_loss_exact(&q, p, spec);
            (q, loss)
        }
        GradientMode::Sampled { shots, seed, step } => {
            let h = sample_histogram(&base_probs, shots, &mut stream(seed, &[purpose::GRAD_BASE, step as u64]))?;
            let loss = mmd_loss(&h, p, spec)?;
            (h.empirical(), loss)
        }
    };

    let shifted = |i: usize, sign: u64| -> Result<Vec<f64>> {
        let mut t = theta.to_vec();
        t[i] += if sign == 0 { FRAC_PI_2 } else { -FRAC_PI_2 };
        let probs = output_probabilities(circuit, &t, noise)?;
        Ok(match mode {
            GradientMode::Exact => probs.into_vec(),
            GradientMode::Sampled { shots, seed, step } => {
                let mut rng = stream(seed, &[purpose::GRAD_SHIFT, step as u64, i as u64, sign]);
                sample_histogram(&probs, shots, &mut rng)?.empirical()
            }
        })
    };

    let grad = (0..theta.len())
        .into_par_iter()
        .map(|i| {
            let plus = shifted(i, 0)?;
            let minus = shifted(i, 1)?;
            let diff: Vec<f64> = plus.iter().zip(&minus).map(|(a, b)| a - b).collect();
            Ok(spec.expect(&diff, &base) - spec.expect(&diff, p.probs()))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(MmdGradient { grad, loss })
}
