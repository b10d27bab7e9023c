use num_complex::Complex64;

use super::state::{block_indices, target_mask};
use super::{check_cnot, check_qubit, mask, Axis, Operator, ProbabilityVector, StateVector, MAX_DENSITY_QUBITS};
use crate::error::{Error, Result};

/// Mixed state of an `n`-qubit register, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    dim: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_DENSITY_QUBITS {
            return Err(Error::RegisterTooLarge { requested: n_qubits, limit: MAX_DENSITY_QUBITS });
        }
        let dim = 1 << n_qubits;
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        entries[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, dim, entries })
    }

    /// `|psi><psi|`.
    pub fn from_pure(state: &StateVector) -> Result<Self> {
        let mut rho = Self::zero(state.n_qubits())?;
        let amps = state.amplitudes();
        for r in 0..rho.dim {
            for c in 0..rho.dim {
                rho.entries[r * rho.dim + c] = amps[r] * amps[c].conj();
            }
        }
        Ok(rho)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for c in r..self.dim {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    pub fn apply_rotation(&mut self, axis: Axis, qubit: usize, angle: f64) -> Result<()> {
        self.apply_unitary(&axis.rotation(angle), &[qubit])
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        check_cnot(control, target, self.n_qubits)?;
        let (mc, mt) = (mask(control, self.n_qubits), mask(target, self.n_qubits));
        let perm = |i: usize| if i & mc != 0 { i ^ mt } else { i };
        let old = self.entries.clone();
        for r in 0..self.dim {
            for c in 0..self.dim {
                self.entries[r * self.dim + c] = old[perm(r) * self.dim + perm(c)];
            }
        }
        Ok(())
    }

    /// `rho -> U rho U^dagger`.
    pub fn apply_unitary(&mut self, op: &Operator, qubits: &[usize]) -> Result<()> {
        self.check_targets(op, qubits)?;
        self.entries = self.conjugated(op, qubits);
        Ok(())
    }

    /// `rho -> sum_k K rho K^dagger`.
    pub fn apply_channel(&mut self, kraus: &[Operator], qubits: &[usize]) -> Result<()> {
        let mut acc = vec![Complex64::new(0.0, 0.0); self.entries.len()];
        for k in kraus {
            self.check_targets(k, qubits)?;
            for (a, v) in acc.iter_mut().zip(self.conjugated(k, qubits)) {
                *a += v;
            }
        }
        self.entries = acc;
        Ok(())
    }

    fn check_targets(&self, op: &Operator, qubits: &[usize]) -> Result<()> {
        if op.n_qubits() != qubits.len() {
            return Err(Error::Dimension(format!(
                "{}-qubit operator applied to {} qubits",
                op.n_qubits(),
                qubits.len()
            )));
        }
        for &q in qubits {
            check_qubit(q, self.n_qubits)?;
        }
        Ok(())
    }

    /// Returns the entries of `op rho op^dagger` without modifying `self`.
    fn conjugated(&self, op: &Operator, qubits: &[usize]) -> Vec<Complex64> {
        let n = self.n_qubits;
        let dim = self.dim;
        let d = op.dim();
        let tm = target_mask(qubits, n);
        let mut idx = vec![0usize; d];
        let mut tmp = vec![Complex64::new(0.0, 0.0); d];
        let mut out = self.entries.clone();

        // left multiplication acts on the row index
        for base in (0..dim).filter(|b| b & tm == 0) {
            block_indices(base, qubits, n, &mut idx);
            for col in 0..dim {
                for (t, &i) in tmp.iter_mut().zip(&idx) {
                    *t = out[i * dim + col];
                }
                for (r, &i) in idx.iter().enumerate() {
                    out[i * dim + col] = (0..d).map(|k| op.get(r, k) * tmp[k]).sum();
                }
            }
        }
        // right multiplication by op^dagger acts on the column index
        for base in (0..dim).filter(|b| b & tm == 0) {
            block_indices(base, qubits, n, &mut idx);
            for row in 0..dim {
                for (t, &j) in tmp.iter_mut().zip(&idx) {
                    *t = out[row * dim + j];
                }
                for (c, &j) in idx.iter().enumerate() {
                    out[row * dim + j] = (0..d).map(|k| tmp[k] * op.get(c, k).conj()).sum();
                }
            }
        }
        out
    }

    /// Reduced density matrix of one qubit as a 2x2 operator.
    pub fn reduced_single(&self, qubit: usize) -> Result<Operator> {
        check_qubit(qubit, self.n_qubits)?;
        let m = mask(qubit, self.n_qubits);
        let mut red = [[Complex64::new(0.0, 0.0); 2]; 2];
        for base in (0..self.dim).filter(|b| b & m == 0) {
            for (a, row) in red.iter_mut().enumerate() {
                for (b, entry) in row.iter_mut().enumerate() {
                    let r = if a == 1 { base | m } else { base };
                    let c = if b == 1 { base | m } else { base };
                    *entry += self.get(r, c);
                }
            }
        }
        Ok(Operator::single(red))
    }

    /// Diagonal of the matrix, with round-off negatives clamped to zero.
    pub fn probabilities(&self) -> ProbabilityVector {
        let probs = (0..self.dim).map(|i| self.get(i, i).re.max(0.0)).collect();
        ProbabilityVector::from_raw(self.n_qubits, probs)
    }
}
