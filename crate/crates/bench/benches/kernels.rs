use bornbench_bench::{bas22, fixture};
use bornbench_core::metrics::{mean_kl, KlSettings};
use bornbench_core::noise::NoiseModel;
use bornbench_core::sim::output_probabilities;
use bornbench_core::train::{mmd_gradient, Distance, GradientMode, KernelSpec};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn simulate(c: &mut Criterion) {
    let mut g = c.benchmark_group("simulate");
    let noise = NoiseModel::parse("p1 = 0.002\np2 = 0.02\nreadout_flip_all = 0.03\nt_damp = 0.01").unwrap();
    for d_c in [2, 3, 4] {
        let (circuit, theta) = fixture(d_c, 2);
        g.bench_with_input(BenchmarkId::new("statevector", d_c), &d_c, |b, _| {
            b.iter(|| output_probabilities(&circuit, black_box(&theta), None).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("density", d_c), &d_c, |b, _| {
            b.iter(|| output_probabilities(&circuit, black_box(&theta), Some(&noise)).unwrap())
        });
    }
    g.finish();
}

fn gradient(c: &mut Criterion) {
    let p = bas22();
    let k = KernelSpec::new(4, 0.1, Distance::IntegerSquared).unwrap();
    let (circuit, theta) = fixture(2, 2);
    let mut g = c.benchmark_group("mmd_gradient");
    g.bench_function("exact", |b| {
        b.iter(|| mmd_gradient(&circuit, black_box(&theta), &p, &k, GradientMode::Exact, None).unwrap())
    });
    g.bench_function("sampled_2048", |b| {
        let mode = GradientMode::Sampled { shots: 2048, seed: 0, step: 0 };
        b.iter(|| mmd_gradient(&circuit, black_box(&theta), &p, &k, mode, None).unwrap())
    });
    g.finish();
}

fn metrics(c: &mut Criterion) {
    let p = bas22();
    let (circuit, theta) = fixture(2, 2);
    let probs = output_probabilities(&circuit, &theta, None).unwrap();
    let settings = KlSettings::default();
    c.bench_function("mean_kl_10x2048", |b| b.iter(|| mean_kl(&p, black_box(&probs), &settings, 0, &[1]).unwrap()));
}

criterion_group!(benches, simulate, gradient, metrics);
criterion_main!(benches);
