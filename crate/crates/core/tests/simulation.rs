use bornbench_core::ansatz::{build_circuit, Gate};
use bornbench_core::bas::{bas_target_distribution, ImageShape};
use bornbench_core::metrics::kl_divergence_exact;
use bornbench_core::noise::{amplitude_damping_kraus, depolarizing_kraus, symmetric_flip, NoiseModel, Readout};
use bornbench_core::rng::stream;
use bornbench_core::sim::{
    evolve_noisy, output_probabilities, sample_histogram, Axis, DensityMatrix, ProbabilityVector, StateVector,
};
use bornbench_core::train::{random_theta, train, Init, TrainingConfig};
use proptest::prelude::*;
use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn random_circuit(seed: u64) -> (bornbench_core::ansatz::CircuitSpec, Vec<f64>) {
    let mut rng = stream(seed, &[42]);
    let d_c = [0, 2, 3, 4][rng.gen_range(0..4)];
    let layers = rng.gen_range(0..=3);
    let p = bas_target_distribution(ImageShape::new(2, 2).unwrap()).unwrap();
    let c = build_circuit(4, d_c, layers, Some(&p)).unwrap();
    let theta = random_theta(seed, c.parameter_count());
    (c, theta)
}

#[test]
fn density_matrix_agrees_with_statevector_at_zero_noise() {
    for seed in 0..50 {
        let (c, theta) = random_circuit(seed);
        let sv = c.statevector(&theta).unwrap().probabilities();
        let dm = evolve_noisy(&c, &theta, &NoiseModel::noiseless()).unwrap();
        let diff = sv.as_slice().iter().zip(dm.as_slice()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(diff < 1e-12, "seed {seed}: {diff:e}");
    }
}

fn hermitian_min_eigenvalue(rho: &DensityMatrix) -> f64 {
    let m = nalgebra::DMatrix::from_fn(rho.dim(), rho.dim(), |i, j| {
        let z = rho.get(i, j);
        nalgebra::Complex::new(z.re, z.im)
    });
    m.symmetric_eigenvalues().min()
}

#[test]
fn noisy_evolution_keeps_a_valid_state() {
    let (p1, p2, gamma) = (0.05, 0.1, 0.08);
    let dep1 = depolarizing_kraus(p1, 1).unwrap();
    let dep2 = depolarizing_kraus(p2, 2).unwrap();
    let damp = amplitude_damping_kraus(gamma).unwrap();
    for seed in 0..10 {
        let (c, theta) = random_circuit(seed);
        let mut rho = DensityMatrix::zero(4).unwrap();
        for gate in c.gates() {
            match gate {
                Gate::Rotation { axis, qubit, param } => {
                    rho.apply_rotation(axis, qubit, theta[param]).unwrap();
                    rho.apply_channel(&dep1, &[qubit]).unwrap();
                }
                Gate::Cnot(g) => {
                    rho.apply_cnot(g.control, g.target).unwrap();
                    rho.apply_channel(&dep2, &[g.control, g.target]).unwrap();
                }
                Gate::SubCoveringEnd => {
                    for q in 0..4 {
                        rho.apply_channel(&damp, &[q]).unwrap();
                    }
                }
            }
            assert!((rho.trace().re - 1.0).abs() < 1e-10 && rho.trace().im.abs() < 1e-10);
            assert!(rho.hermiticity_error() < 1e-10);
        }
        assert!(hermitian_min_eigenvalue(&rho) >= -1e-8);
    }
}

#[test]
fn noise_raises_kl_of_trained_parameters() {
    let cfg = TrainingConfig { d_c: 2, layers: 2, n_steps: 100, seed: 0, ..Default::default() };
    let run = train(&cfg, Init::Random).unwrap();
    let c = cfg.circuit().unwrap();
    let p = cfg.target().unwrap();
    let noise = NoiseModel {
        p1: 0.002,
        p2: 0.02,
        t_damp: 0.0,
        readout: Readout { default: symmetric_flip(0.03), ..Default::default() },
    };
    let clean = kl_divergence_exact(&p, output_probabilities(&c, run.final_theta(), None).unwrap().as_slice());
    let noisy = kl_divergence_exact(&p, output_probabilities(&c, run.final_theta(), Some(&noise)).unwrap().as_slice());
    assert!(noisy > clean, "{noisy} vs {clean}");
}

#[test]
fn uniform_sampling_passes_chi_square() {
    let q = ProbabilityVector::uniform(4);
    let critical = ChiSquared::new(15.0).unwrap().inverse_cdf(0.999);
    let seeds = 1000;
    let passed = (0..seeds)
        .filter(|&seed| {
            let h = sample_histogram(&q, 2048, &mut stream(seed, &[])).unwrap();
            let expected = 2048.0 / 16.0;
            let chi2: f64 = h.counts().iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
            chi2 < critical
        })
        .count();
    assert!(passed as f64 >= 0.99 * seeds as f64, "{passed}/{seeds}");
}

#[test]
fn empirical_distribution_converges() {
    let mut rng = stream(1, &[]);
    let raw: Vec<f64> = (0..16).map(|_| rng.gen_range(0.0..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let q = ProbabilityVector::new(4, raw.iter().map(|x| x / total).collect()).unwrap();
    let h = sample_histogram(&q, 1_000_000, &mut rng).unwrap();
    assert_eq!(h.counts().iter().sum::<u64>(), 1_000_000);
    assert!(q.l1_distance(&h.empirical()) < 0.01);
}

proptest! {
    #[test]
    fn rotations_invert(axis_x in any::<bool>(), qubit in 0usize..3, angle in -10.0f64..10.0, seed in 0u64..1000) {
        let axis = if axis_x { Axis::X } else { Axis::Z };
        let mut s = StateVector::zero(3).unwrap();
        let mut rng = stream(seed, &[]);
        for q in 0..3 {
            s.apply_rx(q, rng.gen_range(0.0..6.0)).unwrap();
            s.apply_rz(q, rng.gen_range(0.0..6.0)).unwrap();
        }
        s.apply_cnot(0, 2).unwrap();
        let before = s.clone();
        s.apply_rotation(axis, qubit, angle).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
        s.apply_rotation(axis, qubit, -angle).unwrap();
        let diff = s.amplitudes().iter().zip(before.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(diff < 1e-10);
        s.apply_cnot(1, 2).unwrap();
        s.apply_cnot(1, 2).unwrap();
        let diff = s.amplitudes().iter().zip(before.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(diff < 1e-10);
    }

    #[test]
    fn histogram_totals(seed in 0u64..10_000, shots in 1u64..5000) {
        let (c, theta) = random_circuit(seed);
        let q = c.statevector(&theta).unwrap().probabilities();
        let h = sample_histogram(&q, shots, &mut stream(seed, &[7])).unwrap();
        prop_assert_eq!(h.counts().iter().sum::<u64>(), shots);
        prop_assert_eq!(h, sample_histogram(&q, shots, &mut stream(seed, &[7])).unwrap());
    }
}
