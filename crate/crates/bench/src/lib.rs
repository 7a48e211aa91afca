//! Shared fixtures for the benchmarks.

use nlmc_core::{Kernel, Shape};

pub fn ellipse() -> Shape {
    Shape::ellipse([0.0, 0.0], 1.0, 0.5).expect("valid ellipse")
}

pub fn limacon() -> Shape {
    Shape::limacon(1.0, 0.3).expect("valid limacon")
}

pub fn pentagon() -> Shape {
    Shape::polygon(vec![[0.0, 0.0], [1.2, -0.2], [1.0, 0.9], [0.3, 1.1], [-0.4, 0.5]]).expect("valid polygon")
}

pub fn ellipsoid() -> Shape {
    Shape::ellipsoid([0.0, 0.0, 0.0], [1.0, 0.8, 0.6]).expect("valid ellipsoid")
}

pub fn exponential(dim: usize) -> Kernel {
    Kernel::exponential(dim, 1.0, 2.0).expect("valid kernel")
}

pub fn fractional(dim: usize) -> Kernel {
    Kernel::fractional(dim, 0.5, 1.8).expect("valid kernel")
}
