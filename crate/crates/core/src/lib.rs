//! Nonlocal mean curvature of sets for general radial kernels.
//!
//! Kernels are given through their tail measure `nu`, with radial profile
//! `j(r) = nu((r, inf))`. Curvatures are principal-value integrals of the
//! signed indicator `chi = 1_{E^c} - 1_E` against `j(|x - y|)`.

pub mod curvature;
pub mod error;
pub mod kernels;
pub mod movingplanes;
pub mod numerics;
pub mod shapes;

pub use curvature::{CurvatureProfile, CurvatureResult, PvOptions};
pub use error::{Error, Result};
pub use kernels::{Kernel, KernelFamily, KernelSpec, LevyReport};
pub use movingplanes::{Classification, CriticalPlaneReport, MovingPlaneOptions, Verdict};
pub use shapes::{BoundaryPoint, Indicator, Shape, ShapeSpec, SphereMoments};
