use super::{chow_liu_layer, entangler_dc2, entangler_dc4, Cnot, EntanglerLayer};
use crate::bas::TargetDistribution;
use crate::error::{Error, Result};
use crate::sim::{Axis, StateVector, MAX_STATEVECTOR_QUBITS};

/// Per-qubit gate sequence of one rotation layer. Every qubit gets the same
/// pattern, each gate owning one parameter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RotationLayer {
    pub pattern: Vec<Axis>,
}

/// Flattened circuit element, in execution order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Rotation {
        axis: Axis,
        qubit: usize,
        param: usize,
    },
    Cnot(Cnot),
    /// Marks the end of one simultaneously-applied CNOT sub-covering.
    SubCoveringEnd,
}

/// Born machine ansatz: rotation layers interleaved with entangling layers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CircuitSpec {
    n_qubits: usize,
    rotation_layers: Vec<RotationLayer>,
    entangler_layers: Vec<EntanglerLayer>,
    parameter_count: usize,
}

impl CircuitSpec {
    /// Wraps explicit entangling layers. The first rotation layer is
    /// `(Rx, Rz)`, middle layers `(Rz, Rx, Rz)`, the last `(Rz, Rx)`; with no
    /// entanglers the first and last rotation layers are still both present.
    pub fn with_entanglers(n_qubits: usize, entangler_layers: Vec<EntanglerLayer>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_STATEVECTOR_QUBITS {
            return Err(Error::RegisterTooLarge { requested: n_qubits, limit: MAX_STATEVECTOR_QUBITS });
        }
        if let Some(bad) = entangler_layers.iter().find(|l| l.n_qubits() != n_qubits) {
            return Err(Error::Dimension(format!(
                "entangler layer on {} qubits in a {n_qubits}-qubit circuit",
                bad.n_qubits()
            )));
        }
        let n_rot = entangler_layers.len().max(1) + 1;
        let rotation_layers: Vec<_> = (0..n_rot)
            .map(|l| RotationLayer {
                pattern: if l == 0 {
                    vec![Axis::X, Axis::Z]
                } else if l == n_rot - 1 {
                    vec![Axis::Z, Axis::X]
                } else {
                    vec![Axis::Z, Axis::X, Axis::Z]
                },
            })
            .collect();
        let parameter_count = rotation_layers.iter().map(|r| r.pattern.len() * n_qubits).sum();
        Ok(Self { n_qubits, rotation_layers, entangler_layers, parameter_count })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn rotation_layers(&self) -> &[RotationLayer] {
        &self.rotation_layers
    }

    pub fn entangler_layers(&self) -> &[EntanglerLayer] {
        &self.entangler_layers
    }

    pub fn parameter_count(&self) -> usize {
        self.parameter_count
    }

    /// Gates in execution order. Parameters are numbered layer-major,
    /// then qubit, then position in the layer's pattern.
    pub fn gates(&self) -> Vec<Gate> {
        let mut gates = Vec::new();
        let mut param = 0;
        for (l, rot) in self.rotation_layers.iter().enumerate() {
            for qubit in 0..self.n_qubits {
                for &axis in &rot.pattern {
                    gates.push(Gate::Rotation { axis, qubit, param });
                    param += 1;
                }
            }
            if let Some(ent) = self.entangler_layers.get(l) {
                for cover in ent.sub_coverings() {
                    gates.extend(cover.iter().copied().map(Gate::Cnot));
                    gates.push(Gate::SubCoveringEnd);
                }
            }
        }
        gates
    }

    pub fn check_parameters(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.parameter_count {
            return Err(Error::ParameterLength { expected: self.parameter_count, got: theta.len() });
        }
        Ok(())
    }

    /// Noiseless output state for `theta`.
    pub fn statevector(&self, theta: &[f64]) -> Result<StateVector> {
        self.check_parameters(theta)?;
        let mut psi = StateVector::zero(self.n_qubits)?;
        for gate in self.gates() {
            match gate {
                Gate::Rotation { axis, qubit, param } => psi.apply_rotation(axis, qubit, theta[param])?,
                Gate::Cnot(c) => psi.apply_cnot(c.control, c.target)?,
                Gate::SubCoveringEnd => {}
            }
        }
        Ok(psi)
    }

    pub fn cnot_count(&self) -> usize {
        self.entangler_layers.iter().map(EntanglerLayer::cnot_count).sum()
    }
}

/// Builds the 4-qubit built-in designs: `d_c = 0` (empty entanglers, so
/// `layers` only adds rotation layers), 2 (alternating
/// plaquette matchings), 3 (Chow-Liu tree of `chow_liu` rooted at qubit 0)
/// or 4 (both matchings); `layers` entangling layers.
pub fn build_circuit(
    n_qubits: usize,
    d_c: usize,
    layers: usize,
    chow_liu: Option<&TargetDistribution>,
) -> Result<CircuitSpec> {
    let entanglers = match d_c {
        0 => vec![EntanglerLayer::new(n_qubits, Vec::new())?; layers],
        2 | 4 if n_qubits != 4 => return Err(Error::LayoutNeedsFourQubits(n_qubits)),
        2 => (0..layers).map(entangler_dc2).collect(),
        4 => vec![entangler_dc4(); layers],
        3 if layers == 0 => Vec::new(),
        3 => {
            let source = chow_liu.ok_or(Error::MissingChowLiuSource)?;
            if source.n_bits() != n_qubits {
                return Err(Error::Dimension(format!(
                    "Chow-Liu source over {} bits for a {n_qubits}-qubit circuit",
                    source.n_bits()
                )));
            }
            vec![chow_liu_layer(source, 0)?.layer; layers]
        }
        other => return Err(Error::UnsupportedEntangler(other)),
    };
    CircuitSpec::with_entanglers(n_qubits, entanglers)
}
