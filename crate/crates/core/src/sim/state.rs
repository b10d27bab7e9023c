use std::fmt;

use num_complex::Complex64;

use super::{check_cnot, check_qubit, mask, Axis, Operator, ProbabilityVector, MAX_STATEVECTOR_QUBITS};
use crate::error::{Error, Result};

/// Computational basis state of an `n`-qubit register. Bit `k` counted from
/// the most significant end holds qubit `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisIndex(pub usize);

impl BasisIndex {
    pub fn bit(self, qubit: usize, n_qubits: usize) -> bool {
        self.0 & mask(qubit, n_qubits) != 0
    }

    /// Renders the index as `n_qubits` characters, qubit 0 first.
    pub fn to_bitstring(self, n_qubits: usize) -> String {
        (0..n_qubits).map(|q| if self.bit(q, n_qubits) { '1' } else { '0' }).collect()
    }

    pub fn from_bitstring(bits: &str) -> Result<Self> {
        if bits.is_empty() || bits.len() > MAX_STATEVECTOR_QUBITS {
            return Err(Error::Dimension(format!("bitstring `{bits}` has unsupported length")));
        }
        bits.chars()
            .try_fold(0usize, |acc, ch| match ch {
                '0' => Ok(acc << 1),
                '1' => Ok((acc << 1) | 1),
                _ => Err(Error::Dimension(format!("`{bits}` is not a bitstring"))),
            })
            .map(BasisIndex)
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Indices touched by an operator on `qubits`, for the block whose target
/// bits are all zero in `base`. The first listed qubit is the most
/// significant bit of the local index.
pub(crate) fn block_indices(base: usize, qubits: &[usize], n_qubits: usize, out: &mut [usize]) {
    for (local, slot) in out.iter_mut().enumerate() {
        let mut idx = base;
        for (j, &q) in qubits.iter().enumerate() {
            if local & (1 << (qubits.len() - 1 - j)) != 0 {
                idx |= mask(q, n_qubits);
            }
        }
        *slot = idx;
    }
}

pub(crate) fn target_mask(qubits: &[usize], n_qubits: usize) -> usize {
    qubits.iter().fold(0, |m, &q| m | mask(q, n_qubits))
}

/// Pure state of an `n`-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_STATEVECTOR_QUBITS {
            return Err(Error::RegisterTooLarge { requested: n_qubits, limit: MAX_STATEVECTOR_QUBITS });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amplitudes })
    }

    pub fn basis(n_qubits: usize, index: BasisIndex) -> Result<Self> {
        let mut s = Self::zero(n_qubits)?;
        if index.0 >= s.amplitudes.len() {
            return Err(Error::Dimension(format!("basis index {index} needs more than {n_qubits} qubits")));
        }
        s.amplitudes[0] = Complex64::new(0.0, 0.0);
        s.amplitudes[index.0] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// Wraps raw amplitudes; the vector must have power-of-two length and
    /// unit norm (within 1e-10).
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Dimension(format!("{len} amplitudes is not a qubit register")));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Dimension(format!("state norm {norm} is not 1")));
        }
        Ok(Self { n_qubits: len.trailing_zeros() as usize, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply_rx(&mut self, qubit: usize, angle: f64) -> Result<()> {
        self.apply_rotation(Axis::X, qubit, angle)
    }

    pub fn apply_rz(&mut self, qubit: usize, angle: f64) -> Result<()> {
        self.apply_rotation(Axis::Z, qubit, angle)
    }

    pub fn apply_rotation(&mut self, axis: Axis, qubit: usize, angle: f64) -> Result<()> {
        check_qubit(qubit, self.n_qubits)?;
        let (s, c) = (angle / 2.0).sin_cos();
        let m = mask(qubit, self.n_qubits);
        match axis {
            Axis::X => {
                let ms = Complex64::new(0.0, -s);
                for i in (0..self.amplitudes.len()).filter(|i| i & m == 0) {
                    let (a0, a1) = (self.amplitudes[i], self.amplitudes[i | m]);
                    self.amplitudes[i] = a0 * c + a1 * ms;
                    self.amplitudes[i | m] = a0 * ms + a1 * c;
                }
            }
            Axis::Z => {
                let (p0, p1) = (Complex64::new(c, -s), Complex64::new(c, s));
                for (i, a) in self.amplitudes.iter_mut().enumerate() {
                    *a *= if i & m == 0 { p0 } else { p1 };
                }
            }
        }
        Ok(())
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        check_cnot(control, target, self.n_qubits)?;
        let (mc, mt) = (mask(control, self.n_qubits), mask(target, self.n_qubits));
        for i in 0..self.amplitudes.len() {
            if i & mc != 0 && i & mt == 0 {
                self.amplitudes.swap(i, i | mt);
            }
        }
        Ok(())
    }

    /// Applies an arbitrary 1- or 2-qubit operator.
    pub fn apply_operator(&mut self, op: &Operator, qubits: &[usize]) -> Result<()> {
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
        let tm = target_mask(qubits, self.n_qubits);
        let d = op.dim();
        let mut idx = vec![0usize; d];
        let mut old = vec![Complex64::new(0.0, 0.0); d];
        for base in (0..self.amplitudes.len()).filter(|b| b & tm == 0) {
            block_indices(base, qubits, self.n_qubits, &mut idx);
            for (o, &i) in old.iter_mut().zip(&idx) {
                *o = self.amplitudes[i];
            }
            for (r, &i) in idx.iter().enumerate() {
                self.amplitudes[i] = (0..d).map(|c| op.get(r, c) * old[c]).sum();
            }
        }
        Ok(())
    }

    /// Outcome distribution `|amplitude|^2`.
    pub fn probabilities(&self) -> ProbabilityVector {
        ProbabilityVector::from_raw(self.n_qubits, self.amplitudes.iter().map(|a| a.norm_sqr()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn assert_probs(s: &StateVector, expected: &[f64]) {
        for (p, e) in s.probabilities().as_slice().iter().zip(expected) {
            assert!((p - e).abs() < 1e-12, "{:?} vs {expected:?}", s.probabilities());
        }
    }

    #[test]
    fn rx_examples() {
        let mut s = StateVector::zero(1).unwrap();
        s.apply_rx(0, FRAC_PI_2).unwrap();
        assert_probs(&s, &[0.5, 0.5]);

        let mut s = StateVector::zero(1).unwrap();
        s.apply_rx(0, PI).unwrap();
        assert_probs(&s, &[0.0, 1.0]);

        let mut s = StateVector::zero(2).unwrap();
        s.apply_rx(1, 0.3).unwrap();
        let before = s.clone();
        s.apply_rx(0, 0.0).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn rz_is_diagonal_and_invertible() {
        for theta in [0.1, 1.0, 2.5, -4.0] {
            let mut s = StateVector::zero(1).unwrap();
            s.apply_rz(0, theta).unwrap();
            assert_probs(&s, &[1.0, 0.0]);
        }
        let mut s = StateVector::zero(1).unwrap();
        s.apply_rx(0, 0.7).unwrap();
        let before = s.clone();
        s.apply_rz(0, PI).unwrap();
        s.apply_rz(0, -PI).unwrap();
        for (a, b) in s.amplitudes().iter().zip(before.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn rz_changes_subsequent_rx_outcome() {
        // oracle: explicit 2x2 products on (|0>+|1>)/sqrt(2)
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = [Complex64::new(h, 0.0), Complex64::new(h, 0.0)];
        let apply = |m: &Operator, v: [Complex64; 2]| {
            [m.get(0, 0) * v[0] + m.get(0, 1) * v[1], m.get(1, 0) * v[0] + m.get(1, 1) * v[1]]
        };
        let rx = Axis::X.rotation(FRAC_PI_2);
        let rz = Axis::Z.rotation(FRAC_PI_2);
        let only_rx = apply(&rx, plus);
        let both = apply(&rx, apply(&rz, plus));
        let p_only = only_rx[0].norm_sqr();
        let p_both = both[0].norm_sqr();
        assert!((p_only - 0.5).abs() < 1e-12);
        assert!((p_both - 1.0).abs() < 1e-12 || (p_both - 0.0).abs() < 1e-12);

        let mut s = StateVector::from_amplitudes(plus.to_vec()).unwrap();
        s.apply_rz(0, FRAC_PI_2).unwrap();
        s.apply_rx(0, FRAC_PI_2).unwrap();
        assert!((s.probabilities().as_slice()[0] - p_both).abs() < 1e-12);
        assert!((p_both - p_only).abs() > 0.1);
    }

    #[test]
    fn cnot_examples() {
        let mut s = StateVector::basis(2, BasisIndex(0b10)).unwrap();
        s.apply_cnot(0, 1).unwrap();
        assert_probs(&s, &[0.0, 0.0, 0.0, 1.0]);

        let mut s = StateVector::zero(2).unwrap();
        s.apply_cnot(0, 1).unwrap();
        assert_probs(&s, &[1.0, 0.0, 0.0, 0.0]);

        let mut s = StateVector::zero(3).unwrap();
        s.apply_rx(0, 1.1).unwrap();
        s.apply_rx(2, 0.4).unwrap();
        let before = s.clone();
        s.apply_cnot(0, 2).unwrap();
        assert_ne!(s, before);
        s.apply_cnot(0, 2).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn bell_state_probabilities() {
        let mut s = StateVector::zero(2).unwrap();
        s.apply_operator(&hadamard(), &[0]).unwrap();
        s.apply_cnot(0, 1).unwrap();
        assert_probs(&s, &[0.5, 0.0, 0.0, 0.5]);
    }

    fn hadamard() -> Operator {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Operator::single([[h.into(), h.into()], [h.into(), (-h).into()]])
    }

    #[test]
    fn errors() {
        let mut s = StateVector::zero(2).unwrap();
        assert_eq!(s.apply_rx(2, 0.1), Err(Error::QubitOutOfRange { index: 2, n_qubits: 2 }));
        assert_eq!(s.apply_rz(5, 0.1), Err(Error::QubitOutOfRange { index: 5, n_qubits: 2 }));
        assert_eq!(s.apply_cnot(1, 1), Err(Error::SameControlTarget(1)));
        assert!(s.apply_cnot(0, 3).is_err());
        assert!(StateVector::zero(25).is_err());
    }

    #[test]
    fn rotation_matches_generic_operator() {
        let mut a = StateVector::zero(3).unwrap();
        a.apply_rx(0, 0.3).unwrap();
        a.apply_rx(1, 1.3).unwrap();
        a.apply_cnot(0, 2).unwrap();
        let mut b = a.clone();
        a.apply_rx(1, 0.77).unwrap();
        a.apply_rz(2, -1.9).unwrap();
        b.apply_operator(&Axis::X.rotation(0.77), &[1]).unwrap();
        b.apply_operator(&Axis::Z.rotation(-1.9), &[2]).unwrap();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn bitstring_round_trip() {
        for n in 1..=6 {
            for v in 0..(1usize << n) {
                let s = BasisIndex(v).to_bitstring(n);
                assert_eq!(s.len(), n);
                assert_eq!(BasisIndex::from_bitstring(&s).unwrap(), BasisIndex(v));
            }
        }
        assert_eq!(BasisIndex(0b1000).to_bitstring(4), "1000");
        assert!(BasisIndex(0b1000).bit(0, 4));
        assert!(BasisIndex::from_bitstring("10a").is_err());
    }
}
