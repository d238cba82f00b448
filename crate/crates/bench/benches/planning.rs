use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use thetaform_core::optimizer::{decode, run_with};
use thetaform_core::{benchmark_scenario, CostModel, PsoConfig, Variant};

fn cost_evaluation(c: &mut Criterion) {
    let scenario = benchmark_scenario();
    let model = CostModel::new(&scenario);
    let angles: Vec<f64> = (0..30).map(|i| ((i as f64) * 0.37).sin() * 1.5).collect();
    let path = decode(
        &angles,
        &scenario.operation_space,
        scenario.start,
        scenario.target,
    )
    .unwrap();
    c.bench_function("cost/benchmark_path", |b| {
        b.iter(|| model.evaluate(black_box(&path)))
    });
}

fn planning(c: &mut Criterion) {
    let scenario = benchmark_scenario();
    let mut group = c.benchmark_group("plan");
    group.sample_size(10);
    for variant in [Variant::Classic, Variant::Theta] {
        for iterations in [50usize, 300] {
            let config = PsoConfig {
                variant,
                iterations,
                seed: 7,
                ..scenario.pso.clone()
            };
            group.bench_with_input(
                BenchmarkId::new(variant.to_string(), iterations),
                &config,
                |b, cfg| b.iter(|| run_with(&scenario, black_box(cfg)).unwrap()),
            );
        }
    }
    group.finish();
}

criterion_group!(benches, cost_evaluation, planning);
criterion_main!(benches);
