//! Numerical building blocks: quadrature, root finding, extrapolation.

pub mod extrapolation;
pub mod quadrature;
pub mod roots;

pub use extrapolation::{Extrapolant, OrderModel, Richardson};
pub use quadrature::{gauss_kronrod, integrate_piecewise, tanh_sinh, QuadOptions, Quadrature};
pub use roots::{brent, golden_max};

/// Surface measure of the unit sphere in `R^d`, i.e. `2 pi^(d/2) / Gamma(d/2)`.
pub fn unit_sphere_area(d: usize) -> f64 {
    use std::f64::consts::PI;
    match d {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        // recurrence: area(d) = 2 pi / (d - 2) * area(d - 2)
        _ => 2.0 * PI / (d as f64 - 2.0) * unit_sphere_area(d - 2),
    }
}

/// Lebesgue measure of the unit ball in `R^d`.
pub fn unit_ball_volume(d: usize) -> f64 {
    unit_sphere_area(d) / d as f64
}
