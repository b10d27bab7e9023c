use std::f64::consts::TAU;

use rand::Rng;

use super::{
    adam_step, mmd_gradient, mmd_loss, mmd_loss_exact, AdamState, Checkpoint, GradientKind, GradientMode,
    TrainingConfig,
};
use crate::error::{Error, Result};
use crate::metrics::{evaluate_metrics, MetricRecord};
use crate::noise::NoiseModel;
use crate::rng::{purpose, stream};
use crate::sim::{output_probabilities, sample_histogram};

/// Starting point of a run.
#[derive(Debug, Clone, PartialEq)]
pub enum Init {
    /// `theta_i ~ Uniform(0, 2 pi)` from the config seed.
    Random,
    /// Given angles with fresh optimizer state, starting at step 0.
    Theta(Vec<f64>),
    /// Continue from a checkpoint; its model digest must match the config.
    Resume(Checkpoint),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    /// Parameters at the start of the step.
    pub theta: Vec<f64>,
    /// MMD loss at `theta`: the sampled U-statistic estimate, or the exact
    /// value with `gradient = exact`.
    pub loss: f64,
    pub metrics: Option<MetricRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub start_step: usize,
    pub steps: Vec<StepRecord>,
    pub checkpoints: Vec<Checkpoint>,
    pub final_adam: AdamState,
}

impl RunRecord {
    pub fn final_theta(&self) -> &[f64] {
        &self.steps.last().expect("a run records at least one step").theta
    }

    pub fn metrics(&self) -> impl Iterator<Item = &MetricRecord> {
        self.steps.iter().filter_map(|s| s.metrics.as_ref())
    }

    /// Metric record with the smallest mean KL (earliest on ties).
    pub fn min_kl(&self) -> Option<&MetricRecord> {
        self.metrics().fold(None, |best: Option<&MetricRecord>, m| match best {
            Some(b) if b.kl_mean <= m.kl_mean => Some(b),
            _ => Some(m),
        })
    }

    pub fn checkpoint_at(&self, step: usize) -> Option<&Checkpoint> {
        self.checkpoints.iter().find(|c| c.step == step)
    }
}

pub fn random_theta(seed: u64, n_params: usize) -> Vec<f64> {
    let mut rng = stream(seed, &[purpose::INIT]);
    (0..n_params).map(|_| rng.gen_range(0.0..TAU)).collect()
}

/// Runs training without observing progress.
pub fn train(config: &TrainingConfig, init: Init) -> Result<RunRecord> {
    train_with(config, init, |_, _| Ok(()))
}

/// Runs steps `start ..= n_steps`. Every step records its parameters and
/// loss; steps before `n_steps` then apply one Adam update. Metrics run at
/// multiples of `metric_stride` plus the first and last step, checkpoints at
/// multiples of `checkpoint_every`. `observe` sees each step as it completes,
/// with the checkpoint taken at that step if any.
pub fn train_with<F>(config: &TrainingConfig, init: Init, mut observe: F) -> Result<RunRecord>
where
    F: FnMut(&StepRecord, Option<&Checkpoint>) -> Result<()>,
{
    config.validate()?;
    let circuit = config.circuit()?;
    let target = config.target()?;
    let kernel = config.kernel_spec()?;
    let noise: Option<&NoiseModel> = config.noise.as_ref().filter(|n| !n.is_noiseless());
    let n_params = circuit.parameter_count();
    let digest = config.model_digest();

    let (start, mut theta, mut adam) = match init {
        Init::Random => (0, random_theta(config.seed, n_params), AdamState::new(n_params)),
        Init::Theta(theta) => {
            circuit.check_parameters(&theta)?;
            (0, theta, AdamState::new(n_params))
        }
        Init::Resume(ckpt) => {
            if ckpt.digest != digest {
                return Err(Error::Checkpoint(format!(
                    "checkpoint digest {} does not match config digest {digest}",
                    ckpt.digest
                )));
            }
            circuit.check_parameters(&ckpt.theta)?;
            if ckpt.adam.m.len() != n_params {
                return Err(Error::Checkpoint("optimizer state length differs from parameter count".into()));
            }
            if ckpt.step > config.n_steps {
                return Err(Error::Checkpoint(format!(
                    "checkpoint step {} is past n_steps = {}",
                    ckpt.step, config.n_steps
                )));
            }
            (ckpt.step, ckpt.theta, ckpt.adam)
        }
    };

    let mut record =
        RunRecord { start_step: start, steps: Vec::new(), checkpoints: Vec::new(), final_adam: adam.clone() };
    for step in start..=config.n_steps {
        let last = step == config.n_steps;
        let mode = match config.gradient {
            GradientKind::Exact => GradientMode::Exact,
            GradientKind::Sampled => GradientMode::Sampled { shots: config.n_shots_train, seed: config.seed, step },
        };

        let (loss, grad) = if last {
            let probs = output_probabilities(&circuit, &theta, noise)?;
            let loss = match mode {
                GradientMode::Exact => mmd_loss_exact(probs.as_slice(), &target, &kernel),
                GradientMode::Sampled { shots, seed, step } => {
                    let h = sample_histogram(&probs, shots, &mut stream(seed, &[purpose::GRAD_BASE, step as u64]))?;
                    mmd_loss(&h, &target, &kernel)?
                }
            };
            (loss, None)
        } else {
            let g = mmd_gradient(&circuit, &theta, &target, &kernel, mode, noise)?;
            (g.loss, Some(g.grad))
        };

        let metrics = if step % config.metric_stride == 0 || last || step == start {
            let probs = output_probabilities(&circuit, &theta, noise)?;
            let qbas = (config.qbas_stride > 0 && (step % config.qbas_stride == 0 || last)).then_some(&config.qbas);
            Some(evaluate_metrics(&target, &probs, step, &config.kl, qbas, config.seed)?)
        } else {
            None
        };

        let ckpt = (step % config.checkpoint_every == 0).then(|| Checkpoint {
            digest: digest.clone(),
            seed: config.seed,
            step,
            theta: theta.clone(),
            adam: adam.clone(),
        });

        let rec = StepRecord { step, theta: theta.clone(), loss, metrics };
        observe(&rec, ckpt.as_ref())?;
        record.steps.push(rec);
        record.checkpoints.extend(ckpt);

        if let Some(grad) = grad {
            adam_step(&mut adam, &grad, &mut theta, &config.adam);
        }
    }
    record.final_adam = adam;
    Ok(record)
}
