use rand::Rng;

use super::BasisIndex;
use crate::error::{Error, Result};

/// Exact outcome distribution over the `2^n` basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    n_qubits: usize,
    probs: Vec<f64>,
}

impl ProbabilityVector {
    /// Validates that `probs` has `2^n_qubits` entries in `[0, 1]` summing
    /// to 1 within 1e-10.
    pub fn new(n_qubits: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != 1usize << n_qubits {
            return Err(Error::Dimension(format!("{} probabilities for {n_qubits} qubits", probs.len())));
        }
        if let Some(bad) = probs.iter().find(|p| !(-1e-12..=1.0 + 1e-12).contains(*p)) {
            return Err(Error::Dimension(format!("probability {bad} outside [0, 1]")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::Dimension(format!("probabilities sum to {total}")));
        }
        Ok(Self { n_qubits, probs })
    }

    pub(crate) fn from_raw(n_qubits: usize, probs: Vec<f64>) -> Self {
        debug_assert_eq!(probs.len(), 1 << n_qubits);
        Self { n_qubits, probs }
    }

    pub fn uniform(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        Self { n_qubits, probs: vec![1.0 / dim as f64; dim] }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, x: BasisIndex) -> f64 {
        self.probs[x.0]
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }

    /// L1 distance to another distribution on the same register.
    pub fn l1_distance(&self, other: &[f64]) -> f64 {
        self.probs.iter().zip(other).map(|(a, b)| (a - b).abs()).sum()
    }
}

/// Counts from `n_shots` samples of a circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    n_qubits: usize,
    counts: Vec<u64>,
    n_shots: u64,
}

impl Histogram {
    pub fn from_counts(n_qubits: usize, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != 1usize << n_qubits {
            return Err(Error::Dimension(format!("{} counts for {n_qubits} qubits", counts.len())));
        }
        let n_shots = counts.iter().sum();
        if n_shots == 0 {
            return Err(Error::ZeroShots);
        }
        Ok(Self { n_qubits, counts, n_shots })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_shots(&self) -> u64 {
        self.n_shots
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, x: BasisIndex) -> u64 {
        self.counts[x.0]
    }

    pub fn probability(&self, x: BasisIndex) -> f64 {
        self.counts[x.0] as f64 / self.n_shots as f64
    }

    /// Empirical distribution `counts / n_shots`.
    pub fn empirical(&self) -> Vec<f64> {
        let n = self.n_shots as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }
}

/// Draws `n_shots` i.i.d. outcomes from `probs`.
pub fn sample_histogram<R: Rng + ?Sized>(probs: &ProbabilityVector, n_shots: u64, rng: &mut R) -> Result<Histogram> {
    if n_shots == 0 {
        return Err(Error::ZeroShots);
    }
    let mut cumulative = Vec::with_capacity(probs.probs.len());
    let mut total = 0.0;
    for &p in &probs.probs {
        total += p.max(0.0);
        cumulative.push(total);
    }
    // never land on a trailing zero-probability state through round-off
    let last = probs.probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    let mut counts = vec![0u64; probs.probs.len()];
    for _ in 0..n_shots {
        let u = rng.gen::<f64>() * total;
        let idx = cumulative.partition_point(|&c| c <= u).min(last);
        counts[idx] += 1;
    }
    Ok(Histogram { n_qubits: probs.n_qubits, counts, n_shots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn point_mass() {
        let mut p = vec![0.0; 16];
        p[0] = 1.0;
        let probs = ProbabilityVector::new(4, p).unwrap();
        for shots in [1, 7, 2048] {
            let h = sample_histogram(&probs, shots, &mut stream(1, &[shots])).unwrap();
            assert_eq!(h.count(BasisIndex(0)), shots);
            assert_eq!(h.n_shots(), shots);
        }
    }

    #[test]
    fn zero_shots_rejected() {
        let probs = ProbabilityVector::uniform(2);
        assert_eq!(sample_histogram(&probs, 0, &mut stream(0, &[])), Err(Error::ZeroShots));
    }

    #[test]
    fn deterministic_per_seed() {
        let probs = ProbabilityVector::uniform(4);
        let a = sample_histogram(&probs, 500, &mut stream(3, &[9])).unwrap();
        let b = sample_histogram(&probs, 500, &mut stream(3, &[9])).unwrap();
        let c = sample_histogram(&probs, 500, &mut stream(4, &[9])).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn trailing_zero_never_sampled() {
        let probs = ProbabilityVector::new(1, vec![1.0, 0.0]).unwrap();
        let h = sample_histogram(&probs, 10_000, &mut stream(5, &[])).unwrap();
        assert_eq!(h.counts(), &[10_000, 0]);
    }

    #[test]
    fn validation() {
        assert!(ProbabilityVector::new(1, vec![0.5, 0.6]).is_err());
        assert!(ProbabilityVector::new(2, vec![0.5, 0.5]).is_err());
        assert!(Histogram::from_counts(1, vec![0, 0]).is_err());
    }
}
