//! Exact simulation of Rx/Rz/CNOT circuits.
//!
//! Basis convention: qubit 0 is the most significant bit of a basis index, so
//! the bitstring `b0 b1 .. b(n-1)` reads qubit 0 first.

mod density;
mod evolve;
mod operator;
mod prob;
mod state;

pub use density::DensityMatrix;
pub use evolve::{evolve_noisy, output_probabilities};
pub use operator::Operator;
pub use prob::{sample_histogram, Histogram, ProbabilityVector};
pub use state::{BasisIndex, StateVector};

use num_complex::Complex64 as C;

use crate::error::{Error, Result};

/// Largest register accepted by the statevector simulator.
pub const MAX_STATEVECTOR_QUBITS: usize = 24;
/// Largest register accepted by the density-matrix simulator.
pub const MAX_DENSITY_QUBITS: usize = 10;

/// Single-qubit rotation axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Z,
}

impl Axis {
    /// Unitary `exp(-i angle P / 2)` as a 2x2 operator.
    pub fn rotation(self, angle: f64) -> Operator {
        let (s, c) = (angle / 2.0).sin_cos();
        match self {
            Axis::X => Operator::single([[C::new(c, 0.0), C::new(0.0, -s)], [C::new(0.0, -s), C::new(c, 0.0)]]),
            Axis::Z => Operator::single([[C::new(c, -s), C::new(0.0, 0.0)], [C::new(0.0, 0.0), C::new(c, s)]]),
        }
    }
}

pub(crate) fn check_qubit(index: usize, n_qubits: usize) -> Result<()> {
    if index >= n_qubits {
        return Err(Error::QubitOutOfRange { index, n_qubits });
    }
    Ok(())
}

pub(crate) fn check_cnot(control: usize, target: usize, n_qubits: usize) -> Result<()> {
    check_qubit(control, n_qubits)?;
    check_qubit(target, n_qubits)?;
    if control == target {
        return Err(Error::SameControlTarget(control));
    }
    Ok(())
}

/// Bit mask of `qubit` inside a basis index.
#[inline]
pub(crate) fn mask(qubit: usize, n_qubits: usize) -> usize {
    1 << (n_qubits - 1 - qubit)
}
