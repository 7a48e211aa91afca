use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use nlmc_bench::{exponential, limacon, pentagon};
use nlmc_core::movingplanes::{critical_lambda, reflection_deficit, symmetric_difference_with};

fn critical_plane(c: &mut Criterion) {
    let mut g = c.benchmark_group("critical_lambda");
    g.sample_size(10);
    for (name, shape) in [("limacon", limacon()), ("pentagon", pentagon())] {
        g.bench_function(name, |b| b.iter(|| critical_lambda(&shape, black_box(&[0.6, 0.8]), 1e-7).unwrap()));
    }
    g.finish();
}

fn symmetric_difference(c: &mut Criterion) {
    let shape = limacon();
    let mut g = c.benchmark_group("symmetric_difference");
    g.sample_size(10);
    g.bench_function("monte_carlo_100k", |b| {
        b.iter(|| symmetric_difference_with(&shape, black_box(&[1.0, 0.0]), 0.3, 100_000, 42, 0).unwrap())
    });
    let poly = pentagon();
    g.bench_function("exact_polygon", |b| {
        b.iter(|| symmetric_difference_with(&poly, black_box(&[1.0, 0.0]), 0.4, 100_000, 42, 0).unwrap())
    });
    g.finish();
}

fn deficit(c: &mut Criterion) {
    let shape = limacon();
    let k = exponential(2);
    let p = [-0.7, 0.0];
    let mut g = c.benchmark_group("reflection_deficit");
    g.sample_size(10);
    g.bench_function("limacon", |b| {
        b.iter(|| reflection_deficit(&shape, &k, black_box(&[1.0, 0.0]), 0.5, &p).unwrap())
    });
    g.finish();
}

criterion_group!(benches, critical_plane, symmetric_difference, deficit);
criterion_main!(benches);
