use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use nlmc_bench::{ellipse, ellipsoid, exponential, fractional, limacon, pentagon};
use nlmc_core::curvature::{h_epsilon, nonlocal_mean_curvature_with, tangential_derivative_with, PvOptions};

fn sphere_moments(c: &mut Criterion) {
    let mut g = c.benchmark_group("sphere_moments");
    let cases = [("ellipse", ellipse(), vec![0.3, 0.2]), ("pentagon", pentagon(), vec![0.4, 0.3])];
    for (name, shape, x) in &cases {
        g.bench_function(*name, |b| b.iter(|| shape.sphere_moments(black_box(x), black_box(0.37)).unwrap()));
    }
    let solid = ellipsoid();
    g.bench_function("ellipsoid", |b| {
        b.iter(|| solid.sphere_moments(black_box(&[0.1, 0.2, 0.0]), black_box(0.37)).unwrap())
    });
    g.finish();
}

fn truncated_curvature(c: &mut Criterion) {
    let shape = limacon();
    let k = fractional(2);
    let x = shape.boundary_point(&[0.7]).unwrap().position;
    let mut g = c.benchmark_group("h_epsilon");
    for eps in [0.1, 0.01, 0.001] {
        g.bench_with_input(BenchmarkId::from_parameter(eps), &eps, |b, &eps| {
            b.iter(|| h_epsilon(&shape, &k, black_box(&x), eps).unwrap())
        });
    }
    g.finish();
}

fn principal_value(c: &mut Criterion) {
    let shape = ellipse();
    let p = shape.boundary_point(&[0.7]).unwrap();
    let mut g = c.benchmark_group("curvature");
    g.sample_size(20);
    for (name, k) in [("exponential", exponential(2)), ("fractional", fractional(2))] {
        for tol in [1e-6, 1e-9] {
            let opts = PvOptions::with_tol(tol);
            g.bench_function(BenchmarkId::new(name, tol), |b| {
                b.iter(|| nonlocal_mean_curvature_with(&shape, &k, black_box(&p.position), &opts).unwrap())
            });
        }
    }
    let k = exponential(2);
    let v = p.velocity.clone().unwrap();
    let opts = PvOptions::with_tol(1e-8);
    g.bench_function("tangential_derivative", |b| {
        b.iter(|| tangential_derivative_with(&shape, &k, black_box(&p), &v, &opts).unwrap())
    });
    g.finish();
}

criterion_group!(benches, sphere_moments, truncated_curvature, principal_value);
criterion_main!(benches);
