use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use nalgebra::Vector2;
use serde::Serialize;

use super::frame::Iso2;
use super::planar::{circle_circle, normalize_crossings, Crossing};
use super::BoundaryPoint;
use crate::error::{Error, Result};
use crate::numerics::{brent, golden_max};

type V2 = Vector2<f64>;

/// Default number of cached parameter samples used to bracket crossings.
pub const DEFAULT_CURVE_SAMPLES: usize = 4096;

const MAX_DEPTH: usize = 48;

/// Closed curve in local coordinates, parameterized counter-clockwise by the
/// angle `theta` in `[0, 2 pi)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum CurveProfile {
    Circle { radius: f64 },
    Ellipse { a: f64, b: f64 },
    /// `r(theta) = c0 + sum_k (cos[k-1] cos k theta + sin[k-1] sin k theta)`.
    Polar { c0: f64, cos: Vec<f64>, sin: Vec<f64> },
}

impl CurveProfile {
    fn radius(&self, th: f64) -> (f64, f64) {
        match self {
            CurveProfile::Polar { c0, cos, sin } => {
                let mut r = *c0;
                let mut dr = 0.0;
                for k in 0..cos.len().max(sin.len()) {
                    let kf = (k + 1) as f64;
                    let (sk, ck) = (kf * th).sin_cos();
                    let a = cos.get(k).copied().unwrap_or(0.0);
                    let b = sin.get(k).copied().unwrap_or(0.0);
                    r += a * ck + b * sk;
                    dr += kf * (b * ck - a * sk);
                }
                (r, dr)
            }
            CurveProfile::Circle { radius } => (*radius, 0.0),
            CurveProfile::Ellipse { .. } => unreachable!("ellipse is not a polar profile"),
        }
    }

    pub fn point(&self, th: f64) -> V2 {
        let (s, c) = th.sin_cos();
        match self {
            CurveProfile::Circle { radius } => *radius * V2::new(c, s),
            CurveProfile::Ellipse { a, b } => V2::new(a * c, b * s),
            CurveProfile::Polar { .. } => self.radius(th).0 * V2::new(c, s),
        }
    }

    pub fn velocity(&self, th: f64) -> V2 {
        let (s, c) = th.sin_cos();
        match self {
            CurveProfile::Circle { radius } => *radius * V2::new(-s, c),
            CurveProfile::Ellipse { a, b } => V2::new(-a * s, b * c),
            CurveProfile::Polar { .. } => {
                let (r, dr) = self.radius(th);
                V2::new(dr * c - r * s, dr * s + r * c)
            }
        }
    }

    /// Level function `f` (negative inside) and its gradient.
    pub fn level(&self, p: V2) -> (f64, V2) {
        match self {
            CurveProfile::Circle { radius } => {
                let rho = p.norm();
                let g = if rho > 0.0 { p / rho } else { V2::zeros() };
                (rho - radius, g)
            }
            CurveProfile::Ellipse { a, b } => {
                let q = V2::new(p.x / a, p.y / b);
                let rho = q.norm();
                if rho == 0.0 {
                    return (-1.0, V2::zeros());
                }
                (rho - 1.0, V2::new(q.x / a, q.y / b) / rho)
            }
            CurveProfile::Polar { .. } => {
                let rho = p.norm();
                if rho == 0.0 {
                    return (-self.radius(0.0).0, V2::zeros());
                }
                let th = p.y.atan2(p.x);
                let (r, dr) = self.radius(th);
                let er = p / rho;
                let et = V2::new(-er.y, er.x);
                (rho - r, er - (dr / rho) * et)
            }
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            CurveProfile::Circle { radius } => PI * radius * radius,
            CurveProfile::Ellipse { a, b } => PI * a * b,
            CurveProfile::Polar { c0, cos, sin } => {
                let harmonics: f64 = cos.iter().chain(sin.iter()).map(|c| c * c).sum();
                PI * (c0 * c0 + 0.5 * harmonics)
            }
        }
    }
}

#[derive(Debug)]
struct Cache {
    points: Vec<V2>,
    velocities: Vec<V2>,
    // upper bound on the arc length between sample i and i + 1
    arc_bound: Vec<f64>,
}

/// Smooth closed curve: a profile placed in the plane by an isometry.
#[derive(Debug, Clone)]
pub struct SmoothCurve {
    profile: CurveProfile,
    frame: Iso2,
    cache: Arc<Cache>,
}

impl PartialEq for SmoothCurve {
    fn eq(&self, other: &Self) -> bool {
        self.profile == other.profile && self.frame == other.frame && self.samples() == other.samples()
    }
}

impl SmoothCurve {
    pub fn new(profile: CurveProfile, frame: Iso2) -> Result<Self> {
        Self::with_samples(profile, frame, DEFAULT_CURVE_SAMPLES)
    }

    pub fn with_samples(profile: CurveProfile, frame: Iso2, samples: usize) -> Result<Self> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        match &profile {
            CurveProfile::Circle { radius } if !positive(*radius) => {
                return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
            }
            CurveProfile::Ellipse { a, b } if !positive(*a) || !positive(*b) => {
                return Err(Error::InvalidParameter(format!(
                    "semi-axes must be positive, got ({a}, {b})"
                )));
            }
            _ => {}
        }
        if samples < 16 {
            return Err(Error::InvalidParameter(format!("need at least 16 curve samples, got {samples}")));
        }
        let h = TAU / samples as f64;
        if let CurveProfile::Polar { .. } = profile {
            let min_r = (0..4 * samples)
                .map(|i| profile.radius(0.25 * h * i as f64).0)
                .fold(f64::INFINITY, f64::min);
            if !positive(min_r) {
                return Err(Error::InvalidParameter(
                    "polar radius function must stay positive".into(),
                ));
            }
        }
        let points: Vec<V2> = (0..samples).map(|i| frame.apply(&profile.point(h * i as f64))).collect();
        let velocities: Vec<V2> = (0..samples)
            .map(|i| frame.rotate(&profile.velocity(h * i as f64)))
            .collect();
        let arc_bound = (0..samples)
            .map(|i| {
                let th = h * i as f64;
                let v0 = profile.velocity(th).norm();
                let v1 = profile.velocity(th + h).norm();
                let vm = profile.velocity(th + 0.5 * h).norm();
                1.1 * h * v0.max(v1).max(vm)
            })
            .collect();
        Ok(Self {
            profile,
            frame,
            cache: Arc::new(Cache {
                points,
                velocities,
                arc_bound,
            }),
        })
    }

    pub fn profile(&self) -> &CurveProfile {
        &self.profile
    }

    pub fn frame(&self) -> &Iso2 {
        &self.frame
    }

    pub fn samples(&self) -> usize {
        self.cache.points.len()
    }

    fn step(&self) -> f64 {
        TAU / self.samples() as f64
    }

    pub fn transformed(&self, g: &Iso2) -> Self {
        Self::with_samples(self.profile.clone(), self.frame.then(g), self.samples())
            .expect("isometric image of a valid curve is valid")
    }

    pub fn point(&self, th: f64) -> V2 {
        self.frame.apply(&self.profile.point(th))
    }

    pub fn velocity(&self, th: f64) -> V2 {
        self.frame.rotate(&self.profile.velocity(th))
    }

    fn orientation(&self) -> f64 {
        if self.frame.is_orientation_reversing() {
            -1.0
        } else {
            1.0
        }
    }

    pub fn boundary_point(&self, th: f64) -> BoundaryPoint {
        let p = self.point(th);
        let v = self.velocity(th);
        let t = v / v.norm();
        let n = self.orientation() * V2::new(t.y, -t.x);
        BoundaryPoint {
            position: vec![p.x, p.y],
            param: vec![th],
            normal: vec![n.x, n.y],
            tangents: vec![vec![t.x, t.y]],
            velocity: Some(vec![v.x, v.y]),
        }
    }

    pub fn boundary_sample(&self, n: usize) -> Vec<BoundaryPoint> {
        (0..n).map(|k| self.boundary_point(TAU * k as f64 / n as f64)).collect()
    }

    pub fn level(&self, p: V2) -> (f64, V2) {
        let (f, g) = self.profile.level(self.frame.apply_inverse(&p));
        (f, self.frame.rotate(&g))
    }

    /// `f / |grad f|`: exact for circles, first-order accurate near the curve otherwise.
    pub fn signed_distance_estimate(&self, p: V2) -> f64 {
        let (f, g) = self.level(p);
        let gn = g.norm();
        if gn > 0.0 {
            f / gn
        } else {
            f * f64::INFINITY
        }
    }

    pub fn area(&self) -> f64 {
        self.profile.area()
    }

    pub fn support(&self, e: V2) -> f64 {
        let w = self.frame.rotate_inverse(&e);
        let base = self.frame.t.dot(&e);
        match &self.profile {
            CurveProfile::Circle { radius } => base + radius,
            CurveProfile::Ellipse { a, b } => base + (a * a * w.x * w.x + b * b * w.y * w.y).sqrt(),
            CurveProfile::Polar { .. } => self.refine_max(|p| p.dot(&e)),
        }
    }

    fn refine_max<F: Fn(V2) -> f64>(&self, f: F) -> f64 {
        let (best, fbest) = self
            .cache
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| (i, f(*p)))
            .fold((0, f64::NEG_INFINITY), |acc, v| if v.1 > acc.1 { v } else { acc });
        let h = self.step();
        let th = h * best as f64;
        let (_, fr) = golden_max(|t| f(self.point(t)), th - h, th + h, 1e-13);
        fr.max(fbest)
    }

    pub fn farthest_distance(&self, x: V2) -> f64 {
        match &self.profile {
            CurveProfile::Circle { radius } => (x - self.frame.t).norm() + radius,
            _ => self.refine_max(|p| (p - x).norm()),
        }
    }

    pub fn diameter(&self) -> f64 {
        match &self.profile {
            CurveProfile::Circle { radius } => 2.0 * radius,
            CurveProfile::Ellipse { a, b } => 2.0 * a.max(*b),
            CurveProfile::Polar { .. } => {
                let pts = &self.cache.points;
                let n = pts.len();
                let (mut bi, mut bj, mut best) = (0, 0, 0.0);
                for i in 0..n {
                    for j in (i + 1)..n {
                        let d = (pts[i] - pts[j]).norm_squared();
                        if d > best {
                            (bi, bj, best) = (i, j, d);
                        }
                    }
                }
                let h = self.step();
                let (mut ti, mut tj) = (h * bi as f64, h * bj as f64);
                let mut best = best.sqrt();
                for _ in 0..4 {
                    let pj = self.point(tj);
                    ti = golden_max(|t| (self.point(t) - pj).norm(), ti - h, ti + h, 1e-13).0;
                    let pi = self.point(ti);
                    let (t, d) = golden_max(|t| (self.point(t) - pi).norm(), tj - h, tj + h, 1e-13);
                    tj = t;
                    best = best.max(d);
                }
                best
            }
        }
    }

    /// Distances from `x` to the cached samples; reused for every radius.
    pub(crate) fn sample_distances(&self, x: V2) -> Vec<f64> {
        self.cache.points.iter().map(|p| (p - x).norm()).collect()
    }

    /// Crossings of `S_s(x)` with the curve, root-refined on the exact curve.
    pub(crate) fn crossings(&self, x: V2, s: f64, dists: &[f64], out: &mut Vec<Crossing>) {
        out.clear();
        if let CurveProfile::Circle { radius } = self.profile {
            if let Some(c) = circle_circle(x, s, self.frame.t, radius) {
                out.extend_from_slice(&c);
                normalize_crossings(out);
            }
            return;
        }
        let n = dists.len();
        let h = self.step();
        for i in 0..n {
            let j = (i + 1) % n;
            let (d0, d1, bound) = (dists[i], dists[j], self.cache.arc_bound[i]);
            if s < 0.5 * (d0 + d1 - bound) || s > 0.5 * (d0 + d1 + bound) {
                continue;
            }
            let t0 = h * i as f64;
            self.bracket(x, s, t0, t0 + h, d0, d1, bound, 0, out);
        }
        normalize_crossings(out);
    }

    #[allow(clippy::too_many_arguments)]
    fn bracket(&self, x: V2, s: f64, ta: f64, tb: f64, da: f64, db: f64, bound: f64, depth: usize, out: &mut Vec<Crossing>) {
        if s < 0.5 * (da + db - bound) || s > 0.5 * (da + db + bound) {
            return;
        }
        let change = (da < s) != (db < s);
        if change && (bound <= 0.25 * s || depth >= MAX_DEPTH) {
            let g = |t: f64| (self.point(t) - x).norm() - s;
            if let Some(t) = brent(g, ta, tb, 1e-15, 200) {
                let z = self.point(t) - x;
                if z.norm() > 0.0 {
                    out.push(Crossing::from_offset(z));
                }
            }
            return;
        }
        if !change && (bound <= 1e-7 * s || depth >= MAX_DEPTH) {
            return;
        }
        let tm = 0.5 * (ta + tb);
        let dm = (self.point(tm) - x).norm();
        let half = 0.5 * bound;
        self.bracket(x, s, ta, tm, da, dm, half, depth + 1, out);
        self.bracket(x, s, tm, tb, dm, db, half, depth + 1, out);
    }

    /// Distances from `x` at which `|gamma(theta) - x|` is stationary: the radii
    /// where the sphere moments lose smoothness.
    pub(crate) fn critical_radii(&self, x: V2) -> Vec<f64> {
        if let CurveProfile::Circle { radius } = self.profile {
            let d = (x - self.frame.t).norm();
            return [(d - radius).abs(), d + radius].into_iter().filter(|r| *r > 0.0).collect();
        }
        let g = |t: f64| (self.point(t) - x).dot(&self.velocity(t));
        let pts = &self.cache.points;
        let vel = &self.cache.velocities;
        let n = pts.len();
        let h = self.step();
        let vals: Vec<f64> = (0..n).map(|i| (pts[i] - x).dot(&vel[i])).collect();
        let mut out = Vec::new();
        for i in 0..n {
            let (g0, g1) = (vals[i], vals[(i + 1) % n]);
            if g0 == 0.0 {
                out.push((pts[i] - x).norm());
            } else if (g0 < 0.0) != (g1 < 0.0) && g1 != 0.0 {
                let t0 = h * i as f64;
                if let Some(t) = brent(g, t0, t0 + h, 1e-15, 200) {
                    out.push((self.point(t) - x).norm());
                }
            }
        }
        out.retain(|r| *r > 0.0);
        out.sort_by(f64::total_cmp);
        out.dedup_by(|b, a| (*b - *a).abs() <= 1e-14 * a.abs().max(1.0));
        out
    }

    /// Points where the boundary meets `{p . e = lambda}`, with normals.
    /// Each sample interval is split at the extremum of `p . e`, so pairs of
    /// crossings closer than the sample spacing are kept.
    pub(crate) fn line_crossings(&self, e: V2, lambda: f64) -> Vec<(V2, V2)> {
        let pts = &self.cache.points;
        let n = pts.len();
        let h = self.step();
        let f = |t: f64| self.point(t).dot(&e) - lambda;
        let df = |t: f64| self.velocity(t).dot(&e);
        let mut roots = Vec::new();
        let monotone_root = |a: f64, fa: f64, b: f64, fb: f64, roots: &mut Vec<f64>| {
            if fa == 0.0 {
                roots.push(a);
            } else if fb == 0.0 {
                roots.push(b);
            } else if (fa < 0.0) != (fb < 0.0) {
                // cached and recomputed values may disagree in sign at rounding level
                let nearest = if fa.abs() < fb.abs() { a } else { b };
                roots.push(brent(f, a, b, 1e-15, 200).unwrap_or(nearest));
            }
        };
        let mut d_prev = df(0.0);
        for i in 0..n {
            let t0 = h * i as f64;
            let t1 = t0 + h;
            let (f0, f1) = (pts[i].dot(&e) - lambda, pts[(i + 1) % n].dot(&e) - lambda);
            let d_next = df(t1);
            let turn = if (d_prev < 0.0) != (d_next < 0.0) {
                brent(df, t0, t1, 1e-15, 200)
            } else {
                None
            };
            match turn {
                Some(tm) if tm > t0 && tm < t1 => {
                    let fm = f(tm);
                    monotone_root(t0, f0, tm, fm, &mut roots);
                    monotone_root(tm, fm, t1, f1, &mut roots);
                }
                _ => monotone_root(t0, f0, t1, f1, &mut roots),
            }
            d_prev = d_next;
        }
        for r in roots.iter_mut() {
            *r = r.rem_euclid(TAU);
        }
        roots.sort_by(f64::total_cmp);
        roots.dedup_by(|b, a| *b - *a < 1e-12);
        if roots.len() > 1 && roots[0] + TAU - roots[roots.len() - 1] < 1e-12 {
            roots.pop();
        }
        roots
            .into_iter()
            .map(|t| {
                let bp = self.boundary_point(t);
                (
                    V2::new(bp.position[0], bp.position[1]),
                    V2::new(bp.normal[0], bp.normal[1]),
                )
            })
            .collect()
    }

    pub(crate) fn dense_boundary(&self, m: usize) -> Vec<V2> {
        (0..m).map(|k| self.point(TAU * k as f64 / m as f64)).collect()
    }

    pub(crate) fn polygon_vertices(&self, n: usize) -> Vec<V2> {
        self.dense_boundary(n)
    }
}
