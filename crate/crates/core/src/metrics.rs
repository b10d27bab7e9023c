//! Benchmark metrics: KL divergence of sampled output against the target,
//! per-state F1 scores, and the resampled qBAS score.

use rand::Rng;
use rayon::prelude::*;

use crate::bas::TargetDistribution;
use crate::error::{Error, Result};
use crate::rng::{purpose, stream};
use crate::sim::{sample_histogram, BasisIndex, Histogram, ProbabilityVector};

/// KL divergence value and whether the zero-count floor was used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kl {
    pub value: f64,
    pub smoothed: bool,
}

/// `sum_x p(x) ln(p(x) / q(x))` over the support of `p`, with `q` the
/// empirical distribution of `q`. Support states never sampled get
/// probability `floor`; with `floor <= 0` the result is `+inf`.
pub fn kl_divergence(p: &TargetDistribution, q: &Histogram, floor: f64) -> Result<Kl> {
    if p.n_bits() != q.n_qubits() {
        return Err(Error::Dimension(format!("target on {} bits, histogram on {}", p.n_bits(), q.n_qubits())));
    }
    let mut value = 0.0;
    let mut smoothed = false;
    for &x in p.support() {
        let px = p.prob(x);
        let mut qx = q.probability(x);
        if qx == 0.0 {
            if floor <= 0.0 {
                return Ok(Kl { value: f64::INFINITY, smoothed: false });
            }
            qx = floor;
            smoothed = true;
        }
        value += px * (px / qx).ln();
    }
    Ok(Kl { value, smoothed })
}

/// KL divergence against an exact distribution (no sampling, no floor).
pub fn kl_divergence_exact(p: &TargetDistribution, q: &[f64]) -> f64 {
    p.support()
        .iter()
        .map(|&x| {
            let px = p.prob(x);
            px * (px / q[x.0]).ln()
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KlSettings {
    pub repeats: usize,
    pub shots: u64,
    /// Zero-count floor as a fraction of one shot: `floor = scale / shots`.
    pub floor_scale: f64,
}

impl Default for KlSettings {
    fn default() -> Self {
        Self { repeats: 10, shots: 2048, floor_scale: 0.01 }
    }
}

impl KlSettings {
    pub fn floor(&self) -> f64 {
        self.floor_scale / self.shots as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KlSummary {
    pub mean: f64,
    pub std: f64,
    pub smoothed: bool,
    /// Histogram of the first repeat, reused for the F1 scores.
    pub first: Histogram,
}

/// Mean and sample standard deviation of the KL divergence over
/// `settings.repeats` independent histograms of `probs`. Repeat `r` samples
/// from the stream `(seed, tags.., r)`.
pub fn mean_kl(
    p: &TargetDistribution,
    probs: &ProbabilityVector,
    settings: &KlSettings,
    seed: u64,
    tags: &[u64],
) -> Result<KlSummary> {
    if settings.repeats < 2 {
        return Err(Error::Config(format!("mean KL needs at least 2 repeats, got {}", settings.repeats)));
    }
    let runs: Vec<(Histogram, Kl)> = (0..settings.repeats)
        .into_par_iter()
        .map(|r| {
            let mut key = tags.to_vec();
            key.push(r as u64);
            let h = sample_histogram(probs, settings.shots, &mut stream(seed, &key))?;
            let kl = kl_divergence(p, &h, settings.floor())?;
            Ok((h, kl))
        })
        .collect::<Result<_>>()?;
    let values: Vec<f64> = runs.iter().map(|(_, k)| k.value).collect();
    let (mean, var) = mean_and_sample_variance(&values);
    let smoothed = runs.iter().any(|(_, k)| k.smoothed);
    let first = runs.into_iter().next().map(|(h, _)| h).expect("at least two repeats");
    Ok(KlSummary { mean, std: var.sqrt(), smoothed, first })
}

/// Per-state F1 from the absolute deviation `|q - p|`: the deviation counts
/// as false positives when `q > p` and as false negatives when `q < p`.
pub fn f1_score(p: f64, q: f64) -> f64 {
    if q <= 0.0 {
        return 0.0;
    }
    let delta = (q - p).abs();
    let (fp, fn_) = if q > p { (delta, 0.0) } else { (0.0, delta) };
    let tpr = q / (q + fn_);
    let precision = q / (q + fp);
    2.0 * precision * tpr / (precision + tpr)
}

/// F1 of every support state of `p` against the empirical distribution of `q`.
pub fn f1_per_state(p: &TargetDistribution, q: &Histogram) -> Vec<(BasisIndex, f64)> {
    p.support().iter().map(|&x| (x, f1_score(p.prob(x), q.probability(x)))).collect()
}

/// Score of one resample: precision is the fraction of draws that are BAS
/// states, recall the fraction of distinct BAS states that appear.
pub fn qbas_single(draws: &[BasisIndex], is_bas: &[bool], n_bas: usize) -> f64 {
    let valid = draws.iter().filter(|x| is_bas[x.0]).count();
    let mut seen: Vec<usize> = draws.iter().filter(|x| is_bas[x.0]).map(|x| x.0).collect();
    seen.sort_unstable();
    seen.dedup();
    let precision = valid as f64 / draws.len() as f64;
    let recall = seen.len() as f64 / n_bas as f64;
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

/// Mean and sample variance of the qBAS score over `n_resamples` draws of
/// `n_samples` outcomes (with replacement) from the empirical distribution
/// of `q`.
pub fn qbas_score<R: Rng + ?Sized>(
    q: &Histogram,
    bas: &[BasisIndex],
    n_samples: usize,
    n_resamples: usize,
    rng: &mut R,
) -> Result<(f64, f64)> {
    if n_samples == 0 || n_resamples == 0 {
        return Err(Error::Config("qBAS needs at least one sample and one resample".into()));
    }
    let mut is_bas = vec![false; q.counts().len()];
    for x in bas {
        *is_bas.get_mut(x.0).ok_or_else(|| Error::Dimension(format!("BAS state {x} out of range")))? = true;
    }
    let mut cumulative = Vec::with_capacity(q.counts().len());
    let mut acc = 0u64;
    for &c in q.counts() {
        acc += c;
        cumulative.push(acc);
    }
    let mut draws = vec![BasisIndex(0); n_samples];
    let mut scores = Vec::with_capacity(n_resamples);
    for _ in 0..n_resamples {
        for d in draws.iter_mut() {
            let u = rng.gen_range(0..q.n_shots());
            *d = BasisIndex(cumulative.partition_point(|&c| c <= u));
        }
        scores.push(qbas_single(&draws, &is_bas, bas.len()));
    }
    Ok(mean_and_sample_variance(&scores))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QbasSettings {
    pub histograms: usize,
    pub shots: u64,
    pub samples: usize,
    pub resamples: usize,
}

impl Default for QbasSettings {
    fn default() -> Self {
        Self { histograms: 11, shots: 1024, samples: 15, resamples: 10_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QbasSummary {
    pub mean: f64,
    pub variance: f64,
    /// Set when some histogram had zero score variance and the plain mean
    /// was used instead of the inverse-variance weighting.
    pub unweighted: bool,
}

/// Scores `settings.histograms` independent histograms of `probs` and
/// combines them with inverse-variance weights. The reported variance is
/// the weighted pooled variance of the resampled scores,
/// `sum w_k (var_k + (mean_k - mean)^2) / sum w_k`.
pub fn qbas_protocol(
    probs: &ProbabilityVector,
    bas: &[BasisIndex],
    settings: &QbasSettings,
    seed: u64,
    tags: &[u64],
) -> Result<QbasSummary> {
    let per_hist: Vec<(f64, f64)> = (0..settings.histograms)
        .into_par_iter()
        .map(|k| {
            let mut key = tags.to_vec();
            key.push(k as u64);
            let mut rng = stream(seed, &key);
            let h = sample_histogram(probs, settings.shots, &mut rng)?;
            qbas_score(&h, bas, settings.samples, settings.resamples, &mut rng)
        })
        .collect::<Result<_>>()?;
    Ok(combine_weighted(&per_hist))
}

pub(crate) fn combine_weighted(per_hist: &[(f64, f64)]) -> QbasSummary {
    let unweighted = per_hist.iter().any(|&(_, v)| v <= 0.0);
    let weights: Vec<f64> = per_hist.iter().map(|&(_, v)| if unweighted { 1.0 } else { 1.0 / v }).collect();
    let total: f64 = weights.iter().sum();
    let mean = per_hist.iter().zip(&weights).map(|(&(m, _), w)| w * m).sum::<f64>() / total;
    let variance = per_hist.iter().zip(&weights).map(|(&(m, v), w)| w * (v + (m - mean).powi(2))).sum::<f64>() / total;
    QbasSummary { mean, variance, unweighted }
}

/// Metrics recorded at one training step.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricRecord {
    pub step: usize,
    pub kl_mean: f64,
    pub kl_std: f64,
    pub f1: Vec<(BasisIndex, f64)>,
    pub qbas: Option<QbasSummary>,
    pub smoothed: bool,
}

/// KL statistics, F1 from the first KL histogram and, when `qbas` is given,
/// the qBAS protocol. Streams are keyed by `(seed, purpose, step, ..)`.
pub fn evaluate_metrics(
    p: &TargetDistribution,
    probs: &ProbabilityVector,
    step: usize,
    kl: &KlSettings,
    qbas: Option<&QbasSettings>,
    seed: u64,
) -> Result<MetricRecord> {
    let summary = mean_kl(p, probs, kl, seed, &[purpose::KL, step as u64])?;
    let f1 = f1_per_state(p, &summary.first);
    let qbas = qbas
        .map(|settings| qbas_protocol(probs, p.support(), settings, seed, &[purpose::QBAS, step as u64]))
        .transpose()?;
    Ok(MetricRecord { step, kl_mean: summary.mean, kl_std: summary.std, f1, qbas, smoothed: summary.smoothed })
}

pub fn mean_and_sample_variance(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}
