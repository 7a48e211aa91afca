use std::f64::consts::{PI, TAU};

use nalgebra::Vector3;
use serde::Serialize;

use super::frame::Iso3;
use super::{BoundaryPoint, RawMoments};
use crate::error::{Error, Result};
use crate::numerics::{brent, gauss_kronrod, golden_max, QuadOptions};

type V3 = Vector3<f64>;

/// Meridian count of the spherical quadrature.
pub const DEFAULT_N_PHI: usize = 128;
/// Equal-area latitude nodes used to bracket boundary crossings on each meridian.
pub const DEFAULT_N_THETA: usize = 64;

/// Bounded solid in local coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SolidProfile {
    Ball { radius: f64 },
    Ellipsoid { axes: [f64; 3] },
    /// Axisymmetric `r(theta) = radius (1 + sum_k coeffs[k-1] cos k theta)`,
    /// `theta` the polar angle from the local z axis.
    PerturbedSphere { radius: f64, coeffs: Vec<f64> },
}

fn direction(theta: f64, phi: f64) -> V3 {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    V3::new(st * cp, st * sp, ct)
}

impl SolidProfile {
    fn radius(&self, theta: f64) -> (f64, f64) {
        match self {
            SolidProfile::PerturbedSphere { radius, coeffs } => {
                let mut r = 1.0;
                let mut dr = 0.0;
                for (k, c) in coeffs.iter().enumerate() {
                    let kf = (k + 1) as f64;
                    let (s, co) = (kf * theta).sin_cos();
                    r += c * co;
                    dr -= kf * c * s;
                }
                (radius * r, radius * dr)
            }
            SolidProfile::Ball { radius } => (*radius, 0.0),
            SolidProfile::Ellipsoid { .. } => unreachable!("ellipsoid is not a radial profile"),
        }
    }

    fn point(&self, theta: f64, phi: f64) -> V3 {
        let w = direction(theta, phi);
        match self {
            SolidProfile::Ellipsoid { axes } => V3::new(axes[0] * w.x, axes[1] * w.y, axes[2] * w.z),
            _ => self.radius(theta).0 * w,
        }
    }

    fn level(&self, p: V3) -> (f64, V3) {
        match self {
            SolidProfile::Ball { radius } => {
                let rho = p.norm();
                let g = if rho > 0.0 { p / rho } else { V3::zeros() };
                (rho - radius, g)
            }
            SolidProfile::Ellipsoid { axes } => {
                let q = V3::new(p.x / axes[0], p.y / axes[1], p.z / axes[2]);
                let rho = q.norm();
                if rho == 0.0 {
                    return (-1.0, V3::zeros());
                }
                (rho - 1.0, V3::new(q.x / axes[0], q.y / axes[1], q.z / axes[2]) / rho)
            }
            SolidProfile::PerturbedSphere { .. } => {
                let rho = p.norm();
                if rho == 0.0 {
                    return (-self.radius(0.0).0, V3::zeros());
                }
                let er = p / rho;
                let axial = (p.x * p.x + p.y * p.y).sqrt();
                let theta = axial.atan2(p.z);
                let (cp, sp) = if axial > 0.0 { (p.x / axial, p.y / axial) } else { (1.0, 0.0) };
                let (st, ct) = theta.sin_cos();
                let et = V3::new(ct * cp, ct * sp, -st);
                let (r, dr) = self.radius(theta);
                (rho - r, er - (dr / rho) * et)
            }
        }
    }

    fn volume(&self) -> f64 {
        match self {
            SolidProfile::Ball { radius } => 4.0 / 3.0 * PI * radius.powi(3),
            SolidProfile::Ellipsoid { axes } => 4.0 / 3.0 * PI * axes[0] * axes[1] * axes[2],
            SolidProfile::PerturbedSphere { .. } => {
                let opts = QuadOptions::with_tolerances(0.0, 1e-14);
                let q = gauss_kronrod(|t| self.radius(t).0.powi(3) * t.sin(), 0.0, PI, &opts);
                TAU / 3.0 * q.value
            }
        }
    }
}

/// Solid in R^3: a profile placed by an isometry.
#[derive(Debug, Clone, PartialEq)]
pub struct Solid {
    profile: SolidProfile,
    frame: Iso3,
}

fn orthonormal_frame(pole: V3) -> [V3; 3] {
    let helper = if pole.x.abs() < 0.9 { V3::x() } else { V3::y() };
    let u1 = (helper - helper.dot(&pole) * pole).normalize();
    let u2 = pole.cross(&u1);
    [u1, u2, pole]
}

impl Solid {
    pub fn new(profile: SolidProfile, frame: Iso3) -> Result<Self> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        match &profile {
            SolidProfile::Ball { radius } if !positive(*radius) => {
                return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
            }
            SolidProfile::Ellipsoid { axes } if !axes.iter().all(|a| positive(*a)) => {
                return Err(Error::InvalidParameter(format!("semi-axes must be positive, got {axes:?}")));
            }
            SolidProfile::PerturbedSphere { radius, .. } => {
                if !positive(*radius) {
                    return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
                }
                let min_r = (0..=4096)
                    .map(|i| profile.radius(PI * i as f64 / 4096.0).0)
                    .fold(f64::INFINITY, f64::min);
                if !positive(min_r) {
                    return Err(Error::InvalidParameter("radius function must stay positive".into()));
                }
            }
            _ => {}
        }
        Ok(Self { profile, frame })
    }

    pub fn profile(&self) -> &SolidProfile {
        &self.profile
    }

    pub fn frame(&self) -> &Iso3 {
        &self.frame
    }

    pub fn transformed(&self, g: &Iso3) -> Self {
        Self {
            profile: self.profile.clone(),
            frame: self.frame.then(g),
        }
    }

    pub fn point(&self, theta: f64, phi: f64) -> V3 {
        self.frame.apply(&self.profile.point(theta, phi))
    }

    pub fn level(&self, p: V3) -> (f64, V3) {
        let (f, g) = self.profile.level(self.frame.apply_inverse(&p));
        (f, self.frame.rotate(&g))
    }

    pub fn signed_distance_estimate(&self, p: V3) -> f64 {
        let (f, g) = self.level(p);
        let gn = g.norm();
        if gn > 0.0 {
            f / gn
        } else {
            f * f64::INFINITY
        }
    }

    pub fn volume(&self) -> f64 {
        self.profile.volume()
    }

    pub fn boundary_point(&self, theta: f64, phi: f64) -> BoundaryPoint {
        let p = self.point(theta, phi);
        let n = self.level(p).1.normalize();
        let [t1, t2, _] = orthonormal_frame(n);
        BoundaryPoint {
            position: vec![p.x, p.y, p.z],
            param: vec![theta, phi],
            normal: vec![n.x, n.y, n.z],
            tangents: vec![vec![t1.x, t1.y, t1.z], vec![t2.x, t2.y, t2.z]],
            velocity: None,
        }
    }

    fn fibonacci_params(n: usize) -> impl Iterator<Item = (f64, f64)> {
        let golden = PI * (3.0 - 5f64.sqrt());
        (0..n).map(move |k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
            (z.acos(), (golden * k as f64).rem_euclid(TAU))
        })
    }

    /// Fibonacci-lattice parameters mapped to the boundary.
    pub fn boundary_sample(&self, n: usize) -> Vec<BoundaryPoint> {
        Self::fibonacci_params(n).map(|(t, p)| self.boundary_point(t, p)).collect()
    }

    pub(crate) fn dense_boundary(&self, m: usize) -> Vec<V3> {
        Self::fibonacci_params(m).map(|(t, p)| self.point(t, p)).collect()
    }

    /// Maximum of `f` over the boundary: parameter grid, then coordinate refinement.
    fn maximize<F: Fn(V3) -> f64>(&self, f: F) -> f64 {
        let (nt, np) = (96, 192);
        let mut best = (0.0, 0.0, f64::NEG_INFINITY);
        for i in 0..=nt {
            let th = PI * i as f64 / nt as f64;
            for j in 0..np {
                let ph = TAU * j as f64 / np as f64;
                let v = f(self.point(th, ph));
                if v > best.2 {
                    best = (th, ph, v);
                }
            }
        }
        let (mut th, mut ph, mut val) = best;
        let (mut wt, mut wp) = (PI / nt as f64, TAU / np as f64);
        for _ in 0..12 {
            let (t, v) = golden_max(|t| f(self.point(t.clamp(0.0, PI), ph)), th - wt, th + wt, 1e-13);
            th = t.clamp(0.0, PI);
            val = val.max(v);
            let (p, v) = golden_max(|p| f(self.point(th, p)), ph - wp, ph + wp, 1e-13);
            ph = p;
            val = val.max(v);
            wt *= 0.5;
            wp *= 0.5;
        }
        val
    }

    pub fn support(&self, e: V3) -> f64 {
        let w = self.frame.rotate_inverse(&e);
        let base = self.frame.t.dot(&e);
        match &self.profile {
            SolidProfile::Ball { radius } => base + radius,
            SolidProfile::Ellipsoid { axes } => {
                base + (0..3).map(|i| (axes[i] * w[i]).powi(2)).sum::<f64>().sqrt()
            }
            SolidProfile::PerturbedSphere { .. } => {
                let axial = (w.x * w.x + w.y * w.y).sqrt();
                base + self.axisymmetric_max(|th, r| r * (th.sin() * axial + th.cos() * w.z))
            }
        }
    }

    fn axisymmetric_max<F: Fn(f64, f64) -> f64>(&self, f: F) -> f64 {
        let n = 2048;
        let h = PI / n as f64;
        let g = |th: f64| {
            let th = th.clamp(0.0, PI);
            f(th, self.profile.radius(th).0)
        };
        let (bi, bv) = (0..=n)
            .map(|i| (i, g(h * i as f64)))
            .fold((0, f64::NEG_INFINITY), |a, v| if v.1 > a.1 { v } else { a });
        let th = h * bi as f64;
        golden_max(g, th - h, th + h, 1e-14).1.max(bv)
    }

    pub fn farthest_distance(&self, x: V3) -> f64 {
        let xl = self.frame.apply_inverse(&x);
        match &self.profile {
            SolidProfile::Ball { radius } => xl.norm() + radius,
            SolidProfile::Ellipsoid { .. } => self.maximize(|p| (p - x).norm()),
            SolidProfile::PerturbedSphere { .. } => {
                let axial = (xl.x * xl.x + xl.y * xl.y).sqrt();
                let sq = self.axisymmetric_max(|th, r| {
                    r * r + 2.0 * r * th.sin() * axial - 2.0 * r * th.cos() * xl.z + xl.norm_squared()
                });
                sq.max(0.0).sqrt()
            }
        }
    }

    pub fn diameter(&self) -> f64 {
        match &self.profile {
            SolidProfile::Ball { radius } => 2.0 * radius,
            SolidProfile::Ellipsoid { axes } => 2.0 * axes.iter().copied().fold(0.0, f64::max),
            SolidProfile::PerturbedSphere { .. } => {
                let pts = self.dense_boundary(1500);
                let mut best = 0.0f64;
                let mut pair = (pts[0], pts[0]);
                for i in 0..pts.len() {
                    for j in (i + 1)..pts.len() {
                        let d = (pts[i] - pts[j]).norm_squared();
                        if d > best {
                            best = d;
                            pair = (pts[i], pts[j]);
                        }
                    }
                }
                let a = self.farthest_distance(pair.0);
                let b = self.farthest_distance(pair.1);
                a.max(b).max(best.sqrt())
            }
        }
    }

    pub(crate) fn critical_radii(&self, x: V3) -> Option<Vec<f64>> {
        match self.profile {
            SolidProfile::Ball { radius } => {
                let d = (x - self.frame.t).norm();
                Some([(d - radius).abs(), d + radius].into_iter().filter(|r| *r > 0.0).collect())
            }
            _ => None,
        }
    }

    /// Direction used as the pole of the spherical grid about `x`.
    pub(crate) fn pole_frame(&self, x: V3) -> [V3; 3] {
        let g = self.level(x).1;
        let pole = if g.norm() > 0.0 { g.normalize() } else { V3::z() };
        orthonormal_frame(pole)
    }

    /// Sphere moments about `x`. Balls use spherical-cap closed forms; other
    /// solids locate the boundary crossing on each of `n_phi` meridians and
    /// integrate the latitude factors exactly between crossings.
    pub(crate) fn moments(&self, x: V3, s: f64, frame: &[V3; 3], tol_b: f64) -> RawMoments {
        if let SolidProfile::Ball { radius } = self.profile {
            return ball_moments(x, s, self.frame.t, radius);
        }
        let [u1, u2, u3] = *frame;
        let nt = DEFAULT_N_THETA;
        let np = DEFAULT_N_PHI;
        let nodes: Vec<f64> = (0..=nt).map(|i| (1.0 - 2.0 * i as f64 / nt as f64).clamp(-1.0, 1.0).acos()).collect();
        let w_phi = TAU / np as f64;
        let mut m0 = 0.0;
        let mut m1 = V3::zeros();
        let mut cuts = Vec::with_capacity(8);
        let mut vals = vec![0.0; nt + 1];
        for j in 0..np {
            let phi = TAU * (j as f64 + 0.5) / np as f64;
            let (sp, cp) = phi.sin_cos();
            let horiz = cp * u1 + sp * u2;
            let at = |th: f64| {
                let (st, ct) = th.sin_cos();
                x + s * (st * horiz + ct * u3)
            };
            for (v, th) in vals.iter_mut().zip(&nodes) {
                *v = self.level(at(*th)).0;
            }
            cuts.clear();
            cuts.push(0.0);
            for i in 0..nt {
                if (vals[i] < 0.0) != (vals[i + 1] < 0.0) {
                    let f = |th: f64| self.level(at(th)).0;
                    if let Some(t) = brent(f, nodes[i], nodes[i + 1], 1e-14, 200) {
                        cuts.push(t);
                    }
                }
            }
            cuts.push(PI);
            for w in cuts.windows(2) {
                let (a, b) = (w[0], w[1]);
                if b <= a {
                    continue;
                }
                let d = self.signed_distance_estimate(at(0.5 * (a + b)));
                let chi = if d.abs() < tol_b {
                    0.0
                } else if d < 0.0 {
                    -1.0
                } else {
                    1.0
                };
                if chi == 0.0 {
                    continue;
                }
                let i0 = a.cos() - b.cos();
                let i_ss = (b - a) / 2.0 - ((2.0 * b).sin() - (2.0 * a).sin()) / 4.0;
                let i_sc = (b.sin().powi(2) - a.sin().powi(2)) / 2.0;
                m0 += chi * w_phi * s * s * i0;
                m1 += chi * w_phi * s.powi(3) * (i_ss * horiz + i_sc * u3);
            }
        }
        RawMoments {
            m0,
            m1: [m1.x, m1.y, m1.z],
        }
    }

    /// Points where the boundary meets the plane `{p . e = lambda}`, with normals.
    pub(crate) fn plane_crossings(&self, e: V3, lambda: f64) -> Vec<(V3, V3)> {
        let (nt, np) = (256, 128);
        let mut out = Vec::new();
        for j in 0..np {
            let phi = TAU * j as f64 / np as f64;
            let f = |th: f64| self.point(th, phi).dot(&e) - lambda;
            for i in 0..nt {
                let (a, b) = (PI * i as f64 / nt as f64, PI * (i + 1) as f64 / nt as f64);
                let (fa, fb) = (f(a), f(b));
                if (fa < 0.0) != (fb < 0.0) {
                    if let Some(t) = brent(f, a, b, 1e-14, 200) {
                        let p = self.point(t, phi);
                        out.push((p, self.level(p).1.normalize()));
                    }
                }
            }
        }
        out
    }
}

/// Spherical-cap closed form for `S_s(x)` against the ball `B_r(c)`.
pub(crate) fn ball_moments(x: V3, s: f64, c: V3, r: f64) -> RawMoments {
    let area = 4.0 * PI * s * s;
    let w = c - x;
    let d = w.norm();
    if d == 0.0 {
        let chi = if s < r { -1.0 } else { 1.0 };
        return RawMoments {
            m0: chi * area,
            m1: [0.0; 3],
        };
    }
    // inside the ball iff cos(angle to w) > kappa
    let kappa = ((s * s + d * d - r * r) / (2.0 * s * d)).clamp(-1.0, 1.0);
    let cap = 2.0 * PI * s * s * (1.0 - kappa);
    let u = w / d;
    let m1 = -2.0 * PI * s.powi(3) * (1.0 - kappa * kappa) * u;
    RawMoments {
        m0: area - 2.0 * cap,
        m1: [m1.x, m1.y, m1.z],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_moments(solid: &Solid, x: V3, s: f64, n: usize) -> (f64, V3) {
        // midpoint rule in (cos theta, phi) on the standard axes
        let (mut m0, mut m1) = (0.0, V3::zeros());
        let w = 2.0 / n as f64 * TAU / (2 * n) as f64;
        for i in 0..n {
            let z = -1.0 + (i as f64 + 0.5) * 2.0 / n as f64;
            let th = z.acos();
            for j in 0..2 * n {
                let ph = TAU * (j as f64 + 0.5) / (2 * n) as f64;
                let u = direction(th, ph);
                let chi = if solid.level(x + s * u).0 < 0.0 { -1.0 } else { 1.0 };
                m0 += chi * s * s * w;
                m1 += chi * s.powi(3) * u * w;
            }
        }
        (m0, m1)
    }

    #[test]
    fn ball_cap_matches_grid() {
        let b = Solid::new(SolidProfile::Ball { radius: 1.0 }, Iso3::identity()).unwrap();
        let x = V3::new(0.3, -0.2, 0.5);
        for s in [0.2, 0.8, 1.5] {
            let m = b.moments(x, s, &b.pole_frame(x), 1e-10);
            let (g0, g1) = grid_moments(&b, x, s, 800);
            assert!((m.m0 - g0).abs() < 2e-3 * s * s, "s = {s}: {} vs {g0}", m.m0);
            assert!((V3::from(m.m1) - g1).norm() < 2e-3 * s.powi(3));
        }
    }

    #[test]
    fn meridian_method_matches_grid() {
        let e = Solid::new(
            SolidProfile::Ellipsoid { axes: [1.0, 0.7, 0.5] },
            Iso3::translation(V3::new(0.1, 0.0, 0.0)),
        )
        .unwrap();
        let x = V3::new(0.6, 0.2, 0.1);
        for s in [0.1, 0.4, 0.9] {
            let m = e.moments(x, s, &e.pole_frame(x), 1e-10);
            let (g0, g1) = grid_moments(&e, x, s, 800);
            assert!((m.m0 - g0).abs() < 2e-3 * s * s, "s = {s}: {} vs {g0}", m.m0);
            assert!((V3::from(m.m1) - g1).norm() < 2e-3 * s.powi(3));
        }
    }

    #[test]
    fn volumes() {
        let b = Solid::new(SolidProfile::Ball { radius: 1.0 }, Iso3::identity()).unwrap();
        assert!((b.volume() - 4.0 * PI / 3.0).abs() < 1e-15);
        let p = Solid::new(
            SolidProfile::PerturbedSphere {
                radius: 1.0,
                coeffs: vec![0.0, 0.1],
            },
            Iso3::identity(),
        )
        .unwrap();
        // (2 pi / 3) * int_{-1}^{1} (1 + 0.1 (2 u^2 - 1))^3 du
        let exact = {
            let n = 200_000;
            let h = 2.0 / n as f64;
            (0..n)
                .map(|i| {
                    let u = -1.0 + (i as f64 + 0.5) * h;
                    (1.0 + 0.1 * (2.0 * u * u - 1.0)).powi(3) * h
                })
                .sum::<f64>()
                * TAU
                / 3.0
        };
        assert!((p.volume() - exact).abs() < 1e-8);
    }

    #[test]
    fn frames_are_orthonormal() {
        let p = Solid::new(
            SolidProfile::PerturbedSphere {
                radius: 1.0,
                coeffs: vec![0.2],
            },
            Iso3::identity(),
        )
        .unwrap();
        for bp in p.boundary_sample(50) {
            let n = V3::from_column_slice(&bp.normal);
            assert!((n.norm() - 1.0).abs() < 1e-12);
            for t in &bp.tangents {
                let t = V3::from_column_slice(t);
                assert!((t.norm() - 1.0).abs() < 1e-12 && t.dot(&n).abs() < 1e-12);
            }
            let x = V3::from_column_slice(&bp.position);
            assert!(p.level(x + 1e-5 * n).0 > 0.0 && p.level(x - 1e-5 * n).0 < 0.0);
        }
    }

    #[test]
    fn support_of_ellipsoid() {
        let e = Solid::new(SolidProfile::Ellipsoid { axes: [2.0, 1.0, 0.5] }, Iso3::identity()).unwrap();
        assert!((e.support(V3::x()) - 2.0).abs() < 1e-15);
        assert!((e.farthest_distance(V3::zeros()) - 2.0).abs() < 1e-9);
    }
}
