//! Shared fixtures for the criterion benches.

use bornbench_core::ansatz::{build_circuit, CircuitSpec};
use bornbench_core::bas::{bas_target_distribution, ImageShape, TargetDistribution};
use bornbench_core::train::random_theta;

pub fn bas22() -> TargetDistribution {
    bas_target_distribution(ImageShape::new(2, 2).expect("valid shape")).expect("valid target")
}

/// Circuit and a random parameter vector for `(d_C, L)` on BAS(2,2).
pub fn fixture(d_c: usize, layers: usize) -> (CircuitSpec, Vec<f64>) {
    let c = build_circuit(4, d_c, layers, Some(&bas22())).expect("valid circuit");
    let theta = random_theta(7, c.parameter_count());
    (c, theta)
}
