use super::{DensityMatrix, ProbabilityVector};
use crate::ansatz::{CircuitSpec, Gate};
use crate::error::Result;
use crate::noise::{amplitude_damping_kraus, apply_readout, depolarizing_kraus, NoiseModel};

/// Outcome distribution of `circuit` at `theta` under `noise`, by
/// density-matrix evolution. Every gate is followed by its noise channel,
/// every CNOT sub-covering by amplitude damping of all qubits, and the
/// readout confusion is applied to the final diagonal.
pub fn evolve_noisy(circuit: &CircuitSpec, theta: &[f64], noise: &NoiseModel) -> Result<ProbabilityVector> {
    circuit.check_parameters(theta)?;
    noise.validate()?;
    let n = circuit.n_qubits();
    let single = (noise.p1 > 0.0).then(|| depolarizing_kraus(noise.p1, 1)).transpose()?;
    let double = (noise.p2 > 0.0).then(|| depolarizing_kraus(noise.p2, 2)).transpose()?;
    let damping = (noise.t_damp > 0.0).then(|| amplitude_damping_kraus(noise.t_damp)).transpose()?;

    let mut rho = DensityMatrix::zero(n)?;
    for gate in circuit.gates() {
        match gate {
            Gate::Rotation { axis, qubit, param } => {
                rho.apply_rotation(axis, qubit, theta[param])?;
                if let Some(k) = &single {
                    rho.apply_channel(k, &[qubit])?;
                }
            }
            Gate::Cnot(c) => {
                rho.apply_cnot(c.control, c.target)?;
                if let Some(k) = &double {
                    rho.apply_channel(k, &[c.control, c.target])?;
                }
            }
            Gate::SubCoveringEnd => {
                if let Some(k) = &damping {
                    for q in 0..n {
                        rho.apply_channel(k, &[q])?;
                    }
                }
            }
        }
    }
    let probs = rho.probabilities();
    if noise.readout.is_identity() {
        return Ok(probs);
    }
    let matrices: Vec<_> = (0..n).map(|q| noise.readout.matrix(q)).collect();
    apply_readout(&probs, &matrices)
}

/// Exact outcome distribution: statevector when `noise` is absent,
/// density matrix otherwise.
pub fn output_probabilities(
    circuit: &CircuitSpec,
    theta: &[f64],
    noise: Option<&NoiseModel>,
) -> Result<ProbabilityVector> {
    match noise {
        Some(model) => evolve_noisy(circuit, theta, model),
        None => Ok(circuit.statevector(theta)?.probabilities()),
    }
}
