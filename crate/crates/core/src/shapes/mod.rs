//! Bounded open sets in the plane and in space, their signed indicator, and
//! moments of the indicator over spheres.

mod curve;
mod frame;
mod planar;
mod polygon;
mod solid;
mod spec;

use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::{Vector2, Vector3};
use serde::Serialize;

pub use curve::{CurveProfile, SmoothCurve, DEFAULT_CURVE_SAMPLES};
pub use frame::{Iso2, Iso3, Isometry};
pub use polygon::Polygon;
pub use solid::{Solid, SolidProfile, DEFAULT_N_PHI, DEFAULT_N_THETA};
pub use spec::ShapeSpec;

pub(crate) use planar::{arcs, circle_circle, normalize_crossings, Crossing};

use crate::error::{Error, Result};
use crate::numerics::unit_sphere_area;

type V2 = Vector2<f64>;
type V3 = Vector3<f64>;

/// Default boundary band, relative to the diameter.
pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-10;

/// Value of the signed indicator `chi = 1_{E^c} - 1_E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Indicator {
    Outside,
    Inside,
    Boundary,
}

impl Indicator {
    /// `+1`, `-1`, or `0` on the boundary band.
    pub fn value(self) -> f64 {
        match self {
            Indicator::Outside => 1.0,
            Indicator::Inside => -1.0,
            Indicator::Boundary => 0.0,
        }
    }
}

/// A boundary point with its outward normal and tangent basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryPoint {
    pub position: Vec<f64>,
    /// Curve angle, polygon arc length, or `(theta, phi)` on solids.
    pub param: Vec<f64>,
    pub normal: Vec<f64>,
    pub tangents: Vec<Vec<f64>>,
    /// Derivative of the position with respect to the parameter, when the
    /// shape is parameterized.
    pub velocity: Option<Vec<f64>>,
}

/// How a set of sphere moments was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Resolution {
    /// Closed-form arc or cap integrals.
    Exact,
    /// Exact arc clipping against a polygon with this many vertices.
    Polygon { vertices: usize },
    /// Crossings bracketed on cached samples and root-refined on the curve.
    ParametricRoots { samples: usize },
    /// Per-meridian crossings with exact latitude integrals.
    Meridians { n_theta: usize, n_phi: usize },
}

/// `m0 = int chi dsigma` and `m1 = int chi z dsigma` over `|z| = s`, `z = y - x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereMoments {
    pub center: Vec<f64>,
    pub radius: f64,
    pub m0: f64,
    pub m1: Vec<f64>,
    pub resolution: Resolution,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct RawMoments {
    pub m0: f64,
    pub m1: [f64; 3],
}

/// The concrete representation of a shape.
#[derive(Debug, Clone, PartialEq)]
pub enum ShapeKind {
    Polygon(Polygon),
    Curve(SmoothCurve),
    Solid(Solid),
}

/// Bounded open set with a closed boundary in `R^2` or `R^3`. Immutable.
#[derive(Debug, Clone)]
pub struct Shape {
    kind: ShapeKind,
    boundary_tol: f64,
    diameter: OnceLock<f64>,
}

impl PartialEq for Shape {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.boundary_tol == other.boundary_tol
    }
}

impl From<ShapeKind> for Shape {
    fn from(kind: ShapeKind) -> Self {
        Self {
            kind,
            boundary_tol: DEFAULT_BOUNDARY_TOL,
            diameter: OnceLock::new(),
        }
    }
}

fn v2(x: &[f64]) -> V2 {
    V2::new(x[0], x[1])
}

fn v3(x: &[f64]) -> V3 {
    V3::new(x[0], x[1], x[2])
}

impl Shape {
    pub fn polygon(vertices: Vec<[f64; 2]>) -> Result<Self> {
        Ok(ShapeKind::Polygon(Polygon::new(vertices)?).into())
    }

    pub fn curve(profile: CurveProfile, frame: Iso2) -> Result<Self> {
        Ok(ShapeKind::Curve(SmoothCurve::new(profile, frame)?).into())
    }

    pub fn solid(profile: SolidProfile, frame: Iso3) -> Result<Self> {
        Ok(ShapeKind::Solid(Solid::new(profile, frame)?).into())
    }

    pub fn disk(center: [f64; 2], radius: f64) -> Result<Self> {
        Self::curve(CurveProfile::Circle { radius }, Iso2::translation(V2::from(center)))
    }

    pub fn ellipse(center: [f64; 2], a: f64, b: f64) -> Result<Self> {
        Self::curve(CurveProfile::Ellipse { a, b }, Iso2::translation(V2::from(center)))
    }

    /// `r(theta) = c0 + sum_k (cos[k-1] cos k theta + sin[k-1] sin k theta)` about `center`.
    pub fn fourier_curve(center: [f64; 2], c0: f64, cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        Self::curve(CurveProfile::Polar { c0, cos, sin }, Iso2::translation(V2::from(center)))
    }

    /// `r(theta) = a + b cos theta` about the origin.
    pub fn limacon(a: f64, b: f64) -> Result<Self> {
        Self::fourier_curve([0.0, 0.0], a, vec![b], vec![])
    }

    /// Rectangle `[-half_length, half_length] x [-radius, radius]` capped by
    /// half-disks, as a polygon with `cap_vertices` vertices per cap.
    pub fn stadium(half_length: f64, radius: f64, cap_vertices: usize) -> Result<Self> {
        if !(half_length >= 0.0 && radius > 0.0 && cap_vertices >= 2) {
            return Err(Error::InvalidParameter(
                "stadium needs half_length >= 0, radius > 0 and at least 2 cap vertices".into(),
            ));
        }
        let mut v = Vec::with_capacity(2 * cap_vertices);
        for (cx, start) in [(half_length, -0.5 * PI), (-half_length, 0.5 * PI)] {
            for k in 0..cap_vertices {
                let t = start + PI * k as f64 / (cap_vertices - 1) as f64;
                v.push(V2::new(cx + radius * t.cos(), radius * t.sin()));
            }
        }
        if half_length == 0.0 {
            v.dedup_by(|b, a| (*b - *a).norm() < 1e-15);
            v.pop();
        }
        Ok(ShapeKind::Polygon(Polygon::from_loop(v)?).into())
    }

    pub fn ball(center: &[f64], radius: f64) -> Result<Self> {
        match center.len() {
            2 => Self::disk([center[0], center[1]], radius),
            3 => Self::solid(SolidProfile::Ball { radius }, Iso3::translation(v3(center))),
            d => Err(Error::InvalidParameter(format!("dimension must be 2 or 3, got {d}"))),
        }
    }

    pub fn ellipsoid(center: [f64; 3], axes: [f64; 3]) -> Result<Self> {
        Self::solid(SolidProfile::Ellipsoid { axes }, Iso3::translation(V3::from(center)))
    }

    pub fn perturbed_sphere(center: [f64; 3], radius: f64, coeffs: Vec<f64>) -> Result<Self> {
        Self::solid(
            SolidProfile::PerturbedSphere { radius, coeffs },
            Iso3::translation(V3::from(center)),
        )
    }

    /// Sets the boundary band to `rel * diameter`.
    pub fn with_boundary_tolerance(mut self, rel: f64) -> Result<Self> {
        if !(rel >= 0.0 && rel.is_finite()) {
            return Err(Error::InvalidParameter(format!("boundary tolerance must be >= 0, got {rel}")));
        }
        self.boundary_tol = rel;
        Ok(self)
    }

    pub fn kind(&self) -> &ShapeKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            ShapeKind::Solid(_) => 3,
            _ => 2,
        }
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::Domain(format!(
                "point has {} coordinates, shape is {}-dimensional",
                x.len(),
                self.dim()
            )));
        }
        if x.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("point coordinates must be finite".into()));
        }
        Ok(())
    }

    pub fn diameter(&self) -> f64 {
        *self.diameter.get_or_init(|| match &self.kind {
            ShapeKind::Polygon(p) => p.diameter(),
            ShapeKind::Curve(c) => c.diameter(),
            ShapeKind::Solid(s) => s.diameter(),
        })
    }

    /// Width of the boundary band, `tol_b`.
    pub fn boundary_band(&self) -> f64 {
        self.boundary_tol * self.diameter()
    }

    pub fn volume(&self) -> f64 {
        match &self.kind {
            ShapeKind::Polygon(p) => p.area(),
            ShapeKind::Curve(c) => c.area(),
            ShapeKind::Solid(s) => s.volume(),
        }
    }

    /// Signed distance (negative inside); exact for polygons, disks and balls,
    /// first-order accurate near the boundary otherwise.
    pub fn signed_distance_estimate(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        Ok(self.sd(x))
    }

    fn sd(&self, x: &[f64]) -> f64 {
        match &self.kind {
            ShapeKind::Polygon(p) => p.signed_distance(v2(x)),
            ShapeKind::Curve(c) => c.signed_distance_estimate(v2(x)),
            ShapeKind::Solid(s) => s.signed_distance_estimate(v3(x)),
        }
    }

    pub fn signed_indicator(&self, x: &[f64]) -> Result<Indicator> {
        self.check_point(x)?;
        Ok(self.indicator(x))
    }

    pub(crate) fn indicator(&self, x: &[f64]) -> Indicator {
        let d = self.sd(x);
        if d.abs() < self.boundary_band() {
            Indicator::Boundary
        } else if d < 0.0 {
            Indicator::Inside
        } else {
            Indicator::Outside
        }
    }

    /// Strict interior membership; points on the band count as outside.
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && self.indicator(x) == Indicator::Inside
    }

    pub(crate) fn contains2(&self, p: V2) -> bool {
        self.contains(&[p.x, p.y])
    }

    /// Largest `|x - y|` over `y` in the closure.
    pub fn farthest_distance(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        Ok(match &self.kind {
            ShapeKind::Polygon(p) => p.farthest_distance(v2(x)),
            ShapeKind::Curve(c) => c.farthest_distance(v2(x)),
            ShapeKind::Solid(s) => s.farthest_distance(v3(x)),
        })
    }

    /// Support function `max_{y in E} y . e` for a unit vector `e`.
    pub fn support(&self, e: &[f64]) -> Result<f64> {
        self.check_point(e)?;
        Ok(match &self.kind {
            ShapeKind::Polygon(p) => p.support(v2(e)),
            ShapeKind::Curve(c) => c.support(v2(e)),
            ShapeKind::Solid(s) => s.support(v3(e)),
        })
    }

    /// Axis-aligned bounding box `(lower, upper)`.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let d = self.dim();
        let mut lo = vec![0.0; d];
        let mut hi = vec![0.0; d];
        for i in 0..d {
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            hi[i] = self.support(&e).expect("unit axis");
            e[i] = -1.0;
            lo[i] = -self.support(&e).expect("unit axis");
        }
        (lo, hi)
    }

    pub fn boundary_sample(&self, n: usize) -> Result<Vec<BoundaryPoint>> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!("need at least 3 boundary points, got {n}")));
        }
        Ok(match &self.kind {
            ShapeKind::Polygon(p) => p.boundary_sample(n),
            ShapeKind::Curve(c) => c.boundary_sample(n),
            ShapeKind::Solid(s) => s.boundary_sample(n),
        })
    }

    /// Boundary point at a parameter value (see [`BoundaryPoint::param`]).
    pub fn boundary_point(&self, param: &[f64]) -> Result<BoundaryPoint> {
        let want = if self.dim() == 3 { 2 } else { 1 };
        if param.len() != want {
            return Err(Error::Domain(format!("expected {want} parameter value(s), got {}", param.len())));
        }
        Ok(match &self.kind {
            ShapeKind::Polygon(p) => p.boundary_point(param[0]),
            ShapeKind::Curve(c) => c.boundary_point(param[0]),
            ShapeKind::Solid(s) => s.boundary_point(param[0], param[1]),
        })
    }

    fn rebuild(&self, kind: ShapeKind) -> Self {
        Self {
            kind,
            boundary_tol: self.boundary_tol,
            diameter: OnceLock::new(),
        }
    }

    /// Image under a planar rigid motion.
    pub fn transformed_planar(&self, g: &Iso2) -> Result<Self> {
        Ok(self.rebuild(match &self.kind {
            ShapeKind::Polygon(p) => ShapeKind::Polygon(p.transformed(g)),
            ShapeKind::Curve(c) => ShapeKind::Curve(c.transformed(g)),
            ShapeKind::Solid(_) => return Err(Error::Domain("planar motion applied to a solid".into())),
        }))
    }

    /// Image under a spatial rigid motion.
    pub fn transformed_spatial(&self, g: &Iso3) -> Result<Self> {
        match &self.kind {
            ShapeKind::Solid(s) => Ok(self.rebuild(ShapeKind::Solid(s.transformed(g)))),
            _ => Err(Error::Domain("spatial motion applied to a planar shape".into())),
        }
    }

    /// Image under `R(x) = x - 2 (x . e - lambda) e`; keeps the representation.
    pub fn reflect(&self, e: &[f64], lambda: f64) -> Result<Self> {
        self.check_point(e)?;
        let norm = e.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!("reflection direction must be a unit vector, |e| = {norm}")));
        }
        if !lambda.is_finite() {
            return Err(Error::Domain("lambda must be finite".into()));
        }
        match self.dim() {
            2 => self.transformed_planar(&Iso2::reflection(v2(e) / norm, lambda)),
            _ => self.transformed_spatial(&Iso3::reflection(v3(e) / norm, lambda)),
        }
    }

    /// Polygon through `n` boundary points (2D only).
    pub fn polygonize(&self, n: usize) -> Result<Self> {
        match &self.kind {
            ShapeKind::Polygon(_) => Ok(self.clone()),
            ShapeKind::Curve(c) => {
                if n < 3 {
                    return Err(Error::InvalidParameter(format!("need at least 3 vertices, got {n}")));
                }
                Ok(self.rebuild(ShapeKind::Polygon(Polygon::from_loop(c.polygon_vertices(n))?)))
            }
            ShapeKind::Solid(_) => Err(Error::Domain("only planar shapes can be polygonized".into())),
        }
    }

    /// Resolution reported by [`Shape::sphere_moments`].
    pub fn resolution(&self) -> Resolution {
        match &self.kind {
            ShapeKind::Polygon(p) => Resolution::Polygon { vertices: p.len() },
            ShapeKind::Curve(c) => match c.profile() {
                CurveProfile::Circle { .. } => Resolution::Exact,
                _ => Resolution::ParametricRoots { samples: c.samples() },
            },
            ShapeKind::Solid(s) => match s.profile() {
                SolidProfile::Ball { .. } => Resolution::Exact,
                _ => Resolution::Meridians {
                    n_theta: DEFAULT_N_THETA,
                    n_phi: DEFAULT_N_PHI,
                },
            },
        }
    }

    /// Largest exterior angle at a polygon vertex; zero for smooth shapes.
    pub fn max_turning_angle(&self) -> f64 {
        match &self.kind {
            ShapeKind::Polygon(p) => p.max_turning_angle(),
            _ => 0.0,
        }
    }

    /// Radii at which the moments about `x` lose smoothness, when known.
    pub fn critical_radii(&self, x: &[f64]) -> Result<Option<Vec<f64>>> {
        self.check_point(x)?;
        Ok(match &self.kind {
            ShapeKind::Polygon(p) => Some(p.critical_radii(v2(x))),
            ShapeKind::Curve(c) => Some(c.critical_radii(v2(x))),
            ShapeKind::Solid(s) => s.critical_radii(v3(x)),
        })
    }

    pub fn sphere_moments(&self, x: &[f64], s: f64) -> Result<SphereMoments> {
        let mut ev = self.evaluator(x)?;
        let raw = ev.eval(s)?;
        Ok(SphereMoments {
            center: x.to_vec(),
            radius: s,
            m0: raw.m0,
            m1: raw.m1[..self.dim()].to_vec(),
            resolution: self.resolution(),
        })
    }

    /// Prepares repeated moment evaluation about a fixed center.
    pub fn evaluator(&self, x: &[f64]) -> Result<MomentEvaluator<'_>> {
        self.check_point(x)?;
        let prepared = match &self.kind {
            ShapeKind::Polygon(_) => Prepared::None,
            ShapeKind::Curve(c) => Prepared::Distances(c.sample_distances(v2(x))),
            ShapeKind::Solid(s) => Prepared::Frame(s.pole_frame(v3(x))),
        };
        Ok(MomentEvaluator {
            shape: self,
            x: [x[0], x[1], if x.len() > 2 { x[2] } else { 0.0 }],
            prepared,
            scratch: Vec::new(),
        })
    }

    /// Boundary points spread along the boundary, at least `m` of them.
    pub(crate) fn dense_boundary(&self, m: usize) -> Vec<Vec<f64>> {
        match &self.kind {
            ShapeKind::Polygon(p) => p.dense_boundary(m).iter().map(|q| vec![q.x, q.y]).collect(),
            ShapeKind::Curve(c) => c.dense_boundary(m).iter().map(|q| vec![q.x, q.y]).collect(),
            ShapeKind::Solid(s) => s.dense_boundary(m).iter().map(|q| vec![q.x, q.y, q.z]).collect(),
        }
    }

    /// Boundary points on the hyperplane `{p . e = lambda}` with outward normals.
    pub(crate) fn plane_contacts(&self, e: &[f64], lambda: f64) -> Vec<(Vec<f64>, Vec<f64>)> {
        match &self.kind {
            ShapeKind::Polygon(p) => p
                .line_crossings(v2(e), lambda)
                .into_iter()
                .map(|(q, n)| (vec![q.x, q.y], vec![n.x, n.y]))
                .collect(),
            ShapeKind::Curve(c) => c
                .line_crossings(v2(e), lambda)
                .into_iter()
                .map(|(q, n)| (vec![q.x, q.y], vec![n.x, n.y]))
                .collect(),
            ShapeKind::Solid(s) => s
                .plane_crossings(v3(e), lambda)
                .into_iter()
                .map(|(q, n)| (vec![q.x, q.y, q.z], vec![n.x, n.y, n.z]))
                .collect(),
        }
    }
}

enum Prepared {
    None,
    Distances(Vec<f64>),
    Frame([V3; 3]),
}

/// Sphere moments about a fixed center for many radii.
pub struct MomentEvaluator<'a> {
    shape: &'a Shape,
    x: [f64; 3],
    prepared: Prepared,
    scratch: Vec<Crossing>,
}

impl MomentEvaluator<'_> {
    pub fn center(&self) -> &[f64] {
        &self.x[..self.shape.dim()]
    }

    pub(crate) fn eval(&mut self, s: f64) -> Result<RawMoments> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::Domain(format!("sphere radius must be positive, got {s}")));
        }
        Ok(self.eval_unchecked(s))
    }

    pub(crate) fn eval_unchecked(&mut self, s: f64) -> RawMoments {
        let shape = self.shape;
        match &shape.kind {
            ShapeKind::Solid(solid) => {
                let Prepared::Frame(frame) = &self.prepared else { unreachable!() };
                solid.moments(V3::from(self.x), s, frame, shape.boundary_band())
            }
            _ => {
                let x = V2::new(self.x[0], self.x[1]);
                self.crossings_2d(s);
                planar::integrate_arcs(x, s, &self.scratch, |p| shape.contains2(p))
            }
        }
    }

    /// Returns `(m0, m1)` with `m1` truncated to the shape dimension.
    pub fn moments(&mut self, s: f64) -> Result<(f64, Vec<f64>)> {
        let r = self.eval(s)?;
        Ok((r.m0, r.m1[..self.shape.dim()].to_vec()))
    }

    fn crossings_2d(&mut self, s: f64) {
        let x = V2::new(self.x[0], self.x[1]);
        match (&self.shape.kind, &self.prepared) {
            (ShapeKind::Polygon(p), _) => p.crossings(x, s, &mut self.scratch),
            (ShapeKind::Curve(c), Prepared::Distances(d)) => c.crossings(x, s, d, &mut self.scratch),
            _ => unreachable!("planar crossings on a solid"),
        }
    }

    /// Crossing points of `S_s(x)` with the boundary (2D only).
    pub(crate) fn circle_crossings(&mut self, s: f64) -> Vec<Crossing> {
        self.crossings_2d(s);
        self.scratch.clone()
    }
}

/// `sigma(S_s) = omega_{d-1} s^{d-1}`.
pub fn sphere_area(dim: usize, s: f64) -> f64 {
    unit_sphere_area(dim) * s.powi(dim as i32 - 1)
}
