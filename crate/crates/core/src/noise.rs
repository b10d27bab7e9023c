//! Gate and readout noise standing in for hardware execution.
//!
//! Channels: single-qubit depolarizing after every rotation, two-qubit
//! depolarizing after every CNOT, optional amplitude damping of every qubit
//! after each 200 ns CNOT sub-covering, and a per-qubit readout confusion
//! matrix applied to the final outcome distribution.
//!
//! Depolarizing strength `p` is the probability of replacing the target
//! qubits' state by the maximally mixed state.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kv;
use crate::sim::{Operator, ProbabilityVector};

/// Row-stochastic 2x2 matrix: `m[true][measured]`.
pub type Confusion = [[f64; 2]; 2];

pub fn symmetric_flip(flip: f64) -> Confusion {
    [[1.0 - flip, flip], [flip, 1.0 - flip]]
}

const IDENTITY_CONFUSION: Confusion = [[1.0, 0.0], [0.0, 1.0]];

#[derive(Debug, Clone, PartialEq)]
pub struct Readout {
    pub default: Confusion,
    pub per_qubit: BTreeMap<usize, Confusion>,
}

impl Default for Readout {
    fn default() -> Self {
        Self { default: IDENTITY_CONFUSION, per_qubit: BTreeMap::new() }
    }
}

impl Readout {
    pub fn matrix(&self, qubit: usize) -> Confusion {
        self.per_qubit.get(&qubit).copied().unwrap_or(self.default)
    }

    pub fn is_identity(&self) -> bool {
        self.default == IDENTITY_CONFUSION && self.per_qubit.values().all(|m| *m == IDENTITY_CONFUSION)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct NoiseModel {
    /// Depolarizing probability after each single-qubit rotation.
    pub p1: f64,
    /// Depolarizing probability after each CNOT.
    pub p2: f64,
    /// Amplitude-damping probability per qubit per CNOT sub-covering.
    pub t_damp: f64,
    pub readout: Readout,
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        Self::default()
    }

    pub fn validate(&self) -> Result<()> {
        for (key, value) in [("p1", self.p1), ("p2", self.p2), ("t_damp", self.t_damp)] {
            check_probability(key, value)?;
        }
        check_confusion(&self.readout.default, 0)?;
        for (&q, m) in &self.readout.per_qubit {
            check_confusion(m, q)?;
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0 && self.t_damp == 0.0 && self.readout.is_identity()
    }

    /// Parses a noise profile: keys `p1`, `p2`, `t_damp`, `readout_flip_all`
    /// and `readout_flip_q<k>`. An empty profile is noiseless.
    pub fn parse(text: &str) -> Result<Self> {
        let mut model = Self::default();
        for entry in kv::parse(text)? {
            let key = entry.key.as_str();
            let v: f64 = kv::value(key, &entry.value)?;
            check_probability(key, v)?;
            match key {
                "p1" => model.p1 = v,
                "p2" => model.p2 = v,
                "t_damp" => model.t_damp = v,
                "readout_flip_all" => model.readout.default = symmetric_flip(v),
                _ => match key.strip_prefix("readout_flip_q").map(str::parse::<usize>) {
                    Some(Ok(q)) => {
                        model.readout.per_qubit.insert(q, symmetric_flip(v));
                    }
                    _ => return Err(Error::UnknownKey(key.to_string())),
                },
            }
        }
        model.validate()?;
        Ok(model)
    }

    /// Canonical `key = value` rendering; `parse` reads it back.
    pub fn to_profile(&self) -> String {
        let mut s = format!("p1 = {:e}\np2 = {:e}\nt_damp = {:e}\n", self.p1, self.p2, self.t_damp);
        s.push_str(&format!("readout_flip_all = {:e}\n", self.readout.default[0][1]));
        for (q, m) in &self.readout.per_qubit {
            s.push_str(&format!("readout_flip_q{q} = {:e}\n", m[0][1]));
        }
        s
    }
}

/// Reads and validates a noise profile from disk.
pub fn load_noise(path: &std::path::Path) -> std::result::Result<NoiseModel, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|e| LoadError::Io(path.display().to_string(), e.to_string()))?;
    NoiseModel::parse(&text).map_err(LoadError::Invalid)
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read noise profile {0}: {1}")]
    Io(String, String),
    #[error("invalid noise profile: {0}")]
    Invalid(#[from] Error),
}

fn check_probability(key: &str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::ProbabilityRange { key: key.to_string(), value });
    }
    Ok(())
}

fn check_confusion(m: &Confusion, qubit: usize) -> Result<()> {
    for row in m {
        if row.iter().any(|&x| !(0.0..=1.0).contains(&x)) || (row[0] + row[1] - 1.0).abs() > 1e-12 {
            return Err(Error::NonStochastic { qubit });
        }
    }
    Ok(())
}

/// Kraus operators of the depolarizing channel on 1 or 2 qubits.
pub fn depolarizing_kraus(p: f64, n_targets: usize) -> Result<Vec<Operator>> {
    check_probability("p", p)?;
    if !(1..=2).contains(&n_targets) {
        return Err(Error::Dimension(format!("depolarizing channel on {n_targets} qubits")));
    }
    let d2 = (1usize << (2 * n_targets)) as f64;
    let paulis: Vec<Operator> = if n_targets == 1 {
        (0..4).map(Operator::pauli).collect()
    } else {
        (0..16).map(|k| Operator::pauli(k / 4).kron(&Operator::pauli(k % 4))).collect()
    };
    let mut ops = Vec::with_capacity(paulis.len());
    for (k, pauli) in paulis.into_iter().enumerate() {
        let weight = if k == 0 { 1.0 - p * (d2 - 1.0) / d2 } else { p / d2 };
        if weight > 0.0 {
            ops.push(pauli.scale(weight.sqrt()));
        }
    }
    Ok(ops)
}

/// Kraus operators of single-qubit amplitude damping with decay probability
/// `gamma`.
pub fn amplitude_damping_kraus(gamma: f64) -> Result<Vec<Operator>> {
    check_probability("t_damp", gamma)?;
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    Ok(vec![
        Operator::single([[o, z], [z, Complex64::new((1.0 - gamma).sqrt(), 0.0)]]),
        Operator::single([[z, Complex64::new(gamma.sqrt(), 0.0)], [z, z]]),
    ])
}

/// Pushes `probs` through independent per-qubit confusion matrices.
pub fn apply_readout(probs: &ProbabilityVector, readout: &[Confusion]) -> Result<ProbabilityVector> {
    let n = probs.n_qubits();
    if readout.len() != n {
        return Err(Error::Dimension(format!("{} confusion matrices for {n} qubits", readout.len())));
    }
    for (q, m) in readout.iter().enumerate() {
        check_confusion(m, q)?;
    }
    let mut current = probs.as_slice().to_vec();
    for (q, m) in readout.iter().enumerate() {
        let bit = 1usize << (n - 1 - q);
        let mut next = vec![0.0; current.len()];
        for (i, &pi) in current.iter().enumerate() {
            let t = usize::from(i & bit != 0);
            next[i & !bit] += pi * m[t][0];
            next[i | bit] += pi * m[t][1];
        }
        current = next;
    }
    Ok(ProbabilityVector::from_raw(n, current))
}
