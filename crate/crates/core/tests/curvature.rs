use nlmc_core::curvature::{
    grad_h_epsilon, h_epsilon, nonlocal_mean_curvature_with, tangential_derivative_with, PvOptions,
};
use nlmc_core::{Kernel, Shape};

fn h_at(shape: &Shape, k: &Kernel, theta: f64, tol: f64) -> f64 {
    let p = shape.boundary_point(&[theta]).unwrap();
    nonlocal_mean_curvature_with(shape, k, &p.position, &PvOptions::with_tol(tol))
        .unwrap()
        .value
}

#[test]
fn ellipse_tangential_derivative_matches_finite_differences() {
    let e = Shape::ellipse([0.0, 0.0], 1.0, 0.5).unwrap();
    let k = Kernel::exponential(2, 1.0, 2.0).unwrap();
    let h = 1e-3;
    for theta in [0.3, 1.1, 2.0, 4.0] {
        let p = e.boundary_point(&[theta]).unwrap();
        let v = p.velocity.clone().unwrap();
        let d = tangential_derivative_with(&e, &k, &p, &v, &PvOptions::with_tol(1e-9)).unwrap();
        let f = |t: f64| h_at(&e, &k, t, 1e-11);
        let fd = (-f(theta + 2.0 * h) + 8.0 * f(theta + h) - 8.0 * f(theta - h) + f(theta - 2.0 * h)) / (12.0 * h);
        println!("theta {theta}: {} vs {fd} (levels {})", d.value, d.epsilons.len());
        assert!((d.value - fd).abs() <= 1e-2 * fd.abs().max(1e-3), "{} vs {fd}", d.value);
    }
}

#[test]
fn fractional_derivative_matches_finite_differences() {
    let e = Shape::ellipse([0.0, 0.0], 1.0, 0.5).unwrap();
    let k = Kernel::fractional(2, 0.5, 1.8).unwrap();
    let h = 1e-3;
    let theta = 0.7;
    let p = e.boundary_point(&[theta]).unwrap();
    let v = p.velocity.clone().unwrap();
    let d = tangential_derivative_with(&e, &k, &p, &v, &PvOptions::with_tol(1e-8)).unwrap();
    let f = |t: f64| h_at(&e, &k, t, 1e-11);
    let fd = (-f(theta + 2.0 * h) + 8.0 * f(theta + h) - 8.0 * f(theta - h) + f(theta - 2.0 * h)) / (12.0 * h);
    println!("fractional: {} vs {fd} converged {}", d.value, d.converged);
    assert!((d.value - fd).abs() <= 1e-2 * fd.abs(), "{} vs {fd}", d.value);
}

#[test]
fn gradient_matches_finite_differences_off_boundary() {
    let e = Shape::limacon(1.0, 0.3).unwrap();
    let k = Kernel::fractional(2, 0.5, 1.8).unwrap();
    for (x, eps) in [([0.2, 0.4], 0.05), ([1.5, -0.3], 0.2), ([1.3, 0.0], 0.1)] {
        let g = grad_h_epsilon(&e, &k, &x, eps).unwrap();
        let h = 1e-5;
        for i in 0..2 {
            let mut a = x;
            let mut b = x;
            a[i] += h;
            b[i] -= h;
            let fd = (h_epsilon(&e, &k, &a, eps).unwrap() - h_epsilon(&e, &k, &b, eps).unwrap()) / (2.0 * h);
            let scale = g[0].hypot(g[1]).max(1.0);
            assert!((g[i] - fd).abs() <= 1e-4 * scale, "{x:?} {i}: {} vs {fd}", g[i]);
        }
    }
}
