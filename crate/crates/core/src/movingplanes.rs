//! Moving planes: caps, reflections, the critical hyperplane and the
//! reflection deficit, used as a numerical symmetry diagnostic.
//!
//! For a unit direction `e`, `pi_lambda = {x . e = lambda}`, the cap is
//! `E_lambda = E ∩ {x . e > lambda}` and `R_lambda` reflects across `pi_lambda`.
//! `lambda_*` is the smallest `lambda` such that `R_s(E_s) ⊂ E` for every
//! `s in (lambda, s_max)`.
//!
//! A point `y` of a cap stays inside `E` under every reflection `R_s`,
//! `s in (lambda, y . e)`, exactly when the segment from `y` in direction `-e`
//! of length `2 (y . e - lambda)` stays in the closure. With `L(y)` the length
//! of the segment before it exits, the predicate reads
//! `y . e - L(y) / 2 <= lambda` for every sampled `y` above the plane.

use nalgebra::Vector2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::{constancy_report, curvature_profile_with, h_absolute, ConstancyReport, PvOptions};
use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::numerics::{brent, gauss_kronrod, QuadOptions};
use crate::shapes::{arcs, circle_circle, normalize_crossings, Crossing, Shape, ShapeKind};

/// Boundary points tested by the inclusion predicate.
pub const DEFAULT_PREDICATE_POINTS: usize = 4096;
/// Grid points per axis of the interior sample (2D; 3D uses the cube root).
pub const DEFAULT_INTERIOR_GRID: usize = 64;
/// Monte-Carlo samples for symmetric differences.
pub const DEFAULT_MC_SAMPLES: usize = 1_000_000;
pub const DEFAULT_SEED: u64 = 42;
/// Steps of the coarse downward scan preceding bisection.
pub const SCAN_STEPS: usize = 512;
/// Angular tolerance for a normal orthogonal to `e`.
pub const NORMAL_ANGLE_TOL: f64 = 1e-4;

// reflected cap points closer than this (relative to the diameter) to the
// critical plane are not used to detect touching
const PLANE_EXCLUSION: f64 = 0.05;
const LINE_MARCH_STEPS: usize = 1024;

fn check_direction(shape: &Shape, e: &[f64]) -> Result<()> {
    if e.len() != shape.dim() {
        return Err(Error::DimensionMismatch {
            kernel: e.len(),
            shape: shape.dim(),
        });
    }
    let n = norm(e);
    if !((n - 1.0).abs() <= 1e-9) {
        return Err(Error::Domain(format!("direction must be a unit vector, |e| = {n}")));
    }
    Ok(())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `R_lambda(x) = x - 2 (x . e - lambda) e`.
pub fn reflect_point(x: &[f64], e: &[f64], lambda: f64) -> Vec<f64> {
    let t = 2.0 * (dot(x, e) - lambda);
    x.iter().zip(e).map(|(xi, ei)| xi - t * ei).collect()
}

/// `max_{x in E} x . e`.
pub fn s_max(shape: &Shape, e: &[f64]) -> Result<f64> {
    check_direction(shape, e)?;
    shape.support(e)
}

/// Volume of a cap, with a standard error when estimated by sampling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapVolume {
    pub value: f64,
    pub stderr: f64,
}

/// The positive cap `E ∩ {x . e > lambda}`.
#[derive(Debug, Clone, Copy)]
pub struct Cap<'a> {
    pub shape: &'a Shape,
    pub direction: &'a [f64],
    pub lambda: f64,
}

pub fn cap<'a>(shape: &'a Shape, e: &'a [f64], lambda: f64) -> Result<Cap<'a>> {
    check_direction(shape, e)?;
    if !lambda.is_finite() {
        return Err(Error::Domain("lambda must be finite".into()));
    }
    Ok(Cap {
        shape,
        direction: e,
        lambda,
    })
}

impl Cap<'_> {
    pub fn contains(&self, x: &[f64]) -> bool {
        dot(x, self.direction) > self.lambda && self.shape.contains(x)
    }

    /// Exact for planar shapes (chord-length integral), Monte-Carlo in 3D.
    pub fn volume(&self) -> CapVolume {
        let e = self.direction;
        let top = self.shape.support(e).expect("validated direction");
        if self.lambda >= top {
            return CapVolume { value: 0.0, stderr: 0.0 };
        }
        let neg: Vec<f64> = e.iter().map(|c| -c).collect();
        let bottom = -self.shape.support(&neg).expect("validated direction");
        if self.lambda <= bottom {
            return CapVolume {
                value: self.shape.volume(),
                stderr: 0.0,
            };
        }
        if self.shape.dim() == 2 {
            let q = gauss_kronrod(
                |t| chord_length(self.shape, e, t),
                self.lambda.max(bottom),
                top,
                &QuadOptions {
                    max_subdivisions: 4000,
                    ..QuadOptions::with_tolerances(1e-14 * self.shape.volume(), 1e-12)
                },
            );
            CapVolume {
                value: q.value,
                stderr: 0.0,
            }
        } else {
            let (lo, hi) = self.shape.bounding_box();
            let est = monte_carlo_volume((&lo, &hi), DEFAULT_MC_SAMPLES, DEFAULT_SEED, 0, |x| self.contains(x));
            CapVolume {
                value: est.0,
                stderr: est.1,
            }
        }
    }
}

/// Total length of `E ∩ {x . e = t}` for a planar shape.
fn chord_length(shape: &Shape, e: &[f64], t: f64) -> f64 {
    let perp = [-e[1], e[0]];
    let mut hits: Vec<(f64, f64)> = shape
        .plane_contacts(e, t)
        .into_iter()
        .map(|(q, n)| (dot(&q, &perp), dot(&n, &perp)))
        .collect();
    hits.sort_by(|a, b| a.0.total_cmp(&b.0));
    // an interior interval runs from an entry (normal against perp) to the next exit
    let mut total = 0.0;
    let mut start = None;
    for (u, nu) in hits {
        match start {
            None if nu < 0.0 => start = Some(u),
            Some(a) if nu > 0.0 => {
                total += u - a;
                start = None;
            }
            _ => {}
        }
    }
    total
}

/// Length travelled from `y` in direction `-e` before leaving the closure.
fn exit_length(shape: &Shape, y: &[f64], e: &[f64], reach: f64) -> f64 {
    let tol = shape.boundary_band();
    if shape.dim() == 2 {
        // candidate exits are the crossings ahead of y; each gap between them is
        // classified by its midpoint, which is robust to edges lying on the line
        let perp = [-e[1], e[0]];
        let ye = dot(y, e);
        let mut cands = vec![0.0];
        for (q, _) in shape.plane_contacts(&perp, dot(y, &perp)) {
            let t = ye - dot(&q, e);
            if t > tol {
                cands.push(t);
            }
        }
        cands.sort_by(f64::total_cmp);
        cands.dedup_by(|b, a| *b - *a <= tol);
        let outside = |t: f64| {
            let p = [y[0] - t * e[0], y[1] - t * e[1]];
            shape.signed_distance_estimate(&p).unwrap_or(f64::INFINITY) > tol
        };
        for w in cands.windows(2) {
            if outside(0.5 * (w[0] + w[1])) {
                return w[0];
            }
        }
        *cands.last().expect("non-empty")
    } else {
        let at = |t: f64| {
            let p: Vec<f64> = y.iter().zip(e).map(|(yi, ei)| yi - t * ei).collect();
            shape.signed_distance_estimate(&p).unwrap_or(f64::INFINITY)
        };
        // quadratic spacing resolves short chords next to the start point
        let step = |k: usize| reach * (k as f64 / LINE_MARCH_STEPS as f64).powi(2);
        let mut prev = 0.0;
        for k in 1..=LINE_MARCH_STEPS {
            let t = step(k);
            if at(t) > 0.0 {
                if at(prev) > 0.0 {
                    return prev;
                }
                return brent(at, prev, t, 1e-15 * reach, 200).unwrap_or(prev);
            }
            prev = t;
        }
        reach
    }
}

/// Sampling controls for the moving-plane diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MovingPlaneOptions {
    /// Absolute tolerance on `lambda_*`; `None` means `1e-6 * diameter`.
    pub tol_lambda: Option<f64>,
    pub boundary_points: usize,
    pub interior_grid: usize,
    pub mc_samples: usize,
    pub seed: u64,
}

impl Default for MovingPlaneOptions {
    fn default() -> Self {
        Self {
            tol_lambda: None,
            boundary_points: DEFAULT_PREDICATE_POINTS,
            interior_grid: DEFAULT_INTERIOR_GRID,
            mc_samples: DEFAULT_MC_SAMPLES,
            seed: DEFAULT_SEED,
        }
    }
}

impl MovingPlaneOptions {
    pub fn tol_lambda_for(&self, shape: &Shape) -> f64 {
        self.tol_lambda.unwrap_or(1e-6 * shape.diameter())
    }
}

/// Sample points of the closure: a dense boundary set plus an interior grid.
fn predicate_points(shape: &Shape, opts: &MovingPlaneOptions) -> Vec<Vec<f64>> {
    let mut pts = shape.dense_boundary(opts.boundary_points);
    let (lo, hi) = shape.bounding_box();
    let d = shape.dim();
    let per_axis = if d == 2 {
        opts.interior_grid
    } else {
        ((opts.interior_grid * opts.interior_grid) as f64).cbrt().round() as usize
    };
    let per_axis = per_axis.max(2);
    let total = per_axis.pow(d as u32);
    for k in 0..total {
        let mut rem = k;
        let mut p = vec![0.0; d];
        for i in 0..d {
            let idx = rem % per_axis;
            rem /= per_axis;
            p[i] = lo[i] + (hi[i] - lo[i]) * (idx as f64 + 0.5) / per_axis as f64;
        }
        if shape.contains(&p) {
            pts.push(p);
        }
    }
    pts
}

/// For every sample `y`: `(y . e, y . e - L(y) / 2)`.
fn chord_midpoints(shape: &Shape, e: &[f64], opts: &MovingPlaneOptions) -> Vec<(f64, f64)> {
    let reach = 2.0 * shape.diameter();
    predicate_points(shape, opts)
        .par_iter()
        .map(|y| {
            let h = dot(y, e);
            (h, h - 0.5 * exit_length(shape, y, e, reach))
        })
        .collect()
}

/// `P(lambda)`: every sample above the plane reflects into the closure,
/// allowing a margin `delta`.
fn predicate(samples: &[(f64, f64)], lambda: f64, delta: f64) -> bool {
    samples.iter().all(|&(h, g)| h <= lambda || g - 0.5 * delta <= lambda)
}

/// Critical position `lambda_*` of the moving plane in direction `e`.
pub fn critical_lambda(shape: &Shape, e: &[f64], tol_lambda: f64) -> Result<f64> {
    critical_lambda_with(
        shape,
        e,
        &MovingPlaneOptions {
            tol_lambda: Some(tol_lambda),
            ..MovingPlaneOptions::default()
        },
    )
}

pub fn critical_lambda_with(shape: &Shape, e: &[f64], opts: &MovingPlaneOptions) -> Result<f64> {
    check_direction(shape, e)?;
    let tol = opts.tol_lambda_for(shape);
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol_lambda must be positive, got {tol}")));
    }
    let top = shape.support(e)?;
    let neg: Vec<f64> = e.iter().map(|c| -c).collect();
    let bottom = -shape.support(&neg)?;
    let samples = chord_midpoints(shape, e, opts);
    let delta = shape.boundary_band();
    if !predicate(&samples, top - tol, delta) {
        return Err(Error::Numerical(
            "moving-plane predicate fails immediately below the top of the set".into(),
        ));
    }
    let step = (top - bottom) / SCAN_STEPS as f64;
    let mut hi = top;
    let mut lo = bottom;
    for k in 1..=SCAN_STEPS {
        let lam = top - step * k as f64;
        if predicate(&samples, lam, delta) {
            hi = lam;
        } else {
            lo = lam;
            break;
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if predicate(&samples, mid, delta) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// How the critical plane is reached.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    /// The reflected cap touches the boundary at `point`, away from the plane.
    Touching { point: Vec<f64> },
    /// The boundary meets the plane at `point` with normal orthogonal to `e`.
    NonTransversal { point: Vec<f64> },
    Both {
        touching: Vec<f64>,
        non_transversal: Vec<f64>,
    },
    Undetermined,
}

impl Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Classification::Touching { .. } => "touching",
            Classification::NonTransversal { .. } => "non_transversal",
            Classification::Both { .. } => "both",
            Classification::Undetermined => "undetermined",
        }
    }

    pub fn touching_point(&self) -> Option<&[f64]> {
        match self {
            Classification::Touching { point } => Some(point),
            Classification::Both { touching, .. } => Some(touching),
            _ => None,
        }
    }
}

/// Touching point: reflected cap boundary within `10 tol_lambda` of the
/// boundary. Non-transversal point: boundary on the plane with `|n . e|`
/// below `1e-4` (widened by the polygon turning angle).
pub fn classify_critical(shape: &Shape, e: &[f64], lambda_star: f64, tol_lambda: f64) -> Result<Classification> {
    check_direction(shape, e)?;
    let contact = 10.0 * tol_lambda;
    let away = PLANE_EXCLUSION * shape.diameter();
    let touching = shape
        .dense_boundary(DEFAULT_PREDICATE_POINTS)
        .into_par_iter()
        .filter(|y| dot(y, e) - lambda_star > away)
        .map(|y| {
            let r = reflect_point(&y, e, lambda_star);
            let d = shape.signed_distance_estimate(&r).map(f64::abs).unwrap_or(f64::INFINITY);
            (d, r)
        })
        .filter(|(d, _)| *d < contact)
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, r)| r);
    let angle_tol = NORMAL_ANGLE_TOL + shape.max_turning_angle();
    let non_transversal = shape
        .plane_contacts(e, lambda_star)
        .into_iter()
        .filter(|(_, n)| dot(n, e).abs() <= angle_tol.sin())
        .min_by(|a, b| dot(&a.1, e).abs().total_cmp(&dot(&b.1, e).abs()))
        .map(|(q, _)| q);
    Ok(match (touching, non_transversal) {
        (Some(t), Some(q)) => Classification::Both {
            touching: t,
            non_transversal: q,
        },
        (Some(t), None) => Classification::Touching { point: t },
        (None, Some(q)) => Classification::NonTransversal { point: q },
        (None, None) => Classification::Undetermined,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureMethod {
    ExactPolygon,
    MonteCarlo,
}

/// `|E Δ R_lambda(E)|` with its standard error (zero when exact).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetricDifference {
    pub value: f64,
    pub stderr: f64,
    pub method: MeasureMethod,
    pub samples: usize,
    pub seed: u64,
}

impl SymmetricDifference {
    /// Below three standard errors, or at rounding level when exact.
    pub fn is_negligible(&self, volume: f64) -> bool {
        self.value <= 3.0 * self.stderr + 1e-9 * volume
    }
}

pub fn symmetric_difference_measure(shape: &Shape, e: &[f64], lambda: f64) -> Result<SymmetricDifference> {
    symmetric_difference_with(shape, e, lambda, DEFAULT_MC_SAMPLES, DEFAULT_SEED, 0)
}

/// `stream` selects an independent Monte-Carlo substream of `seed`.
pub fn symmetric_difference_with(
    shape: &Shape,
    e: &[f64],
    lambda: f64,
    samples: usize,
    seed: u64,
    stream: u32,
) -> Result<SymmetricDifference> {
    check_direction(shape, e)?;
    let reflected = shape.reflect(e, lambda)?;
    if let (ShapeKind::Polygon(a), ShapeKind::Polygon(b)) = (shape.kind(), reflected.kind()) {
        let value = (a.area() + b.area() - 2.0 * a.intersection_area(b)).max(0.0);
        return Ok(SymmetricDifference {
            value,
            stderr: 0.0,
            method: MeasureMethod::ExactPolygon,
            samples: 0,
            seed,
        });
    }
    let (lo_a, hi_a) = shape.bounding_box();
    let (lo_b, hi_b) = reflected.bounding_box();
    let lo: Vec<f64> = lo_a.iter().zip(&lo_b).map(|(a, b)| a.min(*b)).collect();
    let hi: Vec<f64> = hi_a.iter().zip(&hi_b).map(|(a, b)| a.max(*b)).collect();
    let (value, stderr) = monte_carlo_volume((&lo, &hi), samples, seed, stream, |x| {
        shape.contains(x) != reflected.contains(x)
    });
    Ok(SymmetricDifference {
        value,
        stderr,
        method: MeasureMethod::MonteCarlo,
        samples,
        seed,
    })
}

/// Stratified estimate of the volume of `{x in box : f(x)}`: two points per
/// cell, one ChaCha substream per slab of cells so results do not depend on
/// the thread count.
fn monte_carlo_volume<F: Fn(&[f64]) -> bool + Sync>(
    (lo, hi): (&[f64], &[f64]),
    samples: usize,
    seed: u64,
    stream: u32,
    f: F,
) -> (f64, f64) {
    let d = lo.len();
    let per_axis = (((samples / 2).max(1)) as f64).powf(1.0 / d as f64).floor().max(1.0) as usize;
    let width: Vec<f64> = (0..d).map(|i| (hi[i] - lo[i]) / per_axis as f64).collect();
    let cell_vol: f64 = width.iter().product();
    let slabs: Vec<(f64, f64)> = (0..per_axis)
        .into_par_iter()
        .map(|slab| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(((stream as u64) << 32) | slab as u64);
            let inner = per_axis.pow(d as u32 - 1);
            let mut mean = 0.0;
            let mut var = 0.0;
            let mut p = vec![0.0; d];
            for k in 0..inner {
                let mut vals = [0.0f64; 2];
                for v in vals.iter_mut() {
                    let mut rem = k;
                    p[0] = lo[0] + width[0] * (slab as f64 + rng.random::<f64>());
                    for i in 1..d {
                        let idx = rem % per_axis;
                        rem /= per_axis;
                        p[i] = lo[i] + width[i] * (idx as f64 + rng.random::<f64>());
                    }
                    *v = if f(&p) { 1.0 } else { 0.0 };
                }
                mean += 0.5 * (vals[0] + vals[1]);
                // unbiased variance of the two-point cell mean
                var += 0.25 * (vals[0] - vals[1]).powi(2);
            }
            (mean * cell_vol, var * cell_vol * cell_vol)
        })
        .collect();
    let value: f64 = slabs.iter().map(|s| s.0).sum();
    let var: f64 = slabs.iter().map(|s| s.1).sum();
    (value, var.sqrt())
}

/// `int_{E \ E_*} [j(|p - y|) - j(|p - y_*|)] dy` with `E_* = R_lambda(E)` and
/// `y_* = R_lambda(y)`, for `p` on the boundary with `p . e < lambda`.
///
/// Equals `(H(p, E_*) - H(p, E)) / 2`; it is nonnegative when
/// `lambda >= lambda_*`, since then `E \ E_*` lies on the side of `p`.
/// Planar shapes are integrated directly in polar coordinates about `p`;
/// solids use the identity with the absolute curvature integral.
/// Kernels must be bounded at the origin, otherwise the integral diverges.
pub fn reflection_deficit(shape: &Shape, kernel: &Kernel, e: &[f64], lambda: f64, p: &[f64]) -> Result<f64> {
    check_direction(shape, e)?;
    if kernel.dim() != shape.dim() {
        return Err(Error::DimensionMismatch {
            kernel: kernel.dim(),
            shape: shape.dim(),
        });
    }
    let sd = shape.signed_distance_estimate(p)?;
    if sd.abs() > 1e-8 * shape.diameter() {
        return Err(Error::Precondition(format!("p is not on the boundary (signed distance {sd:e})")));
    }
    if dot(p, e) >= lambda - shape.boundary_band() {
        return Err(Error::Precondition(format!(
            "p must lie strictly below the plane: p . e = {} >= lambda = {lambda}",
            dot(p, e)
        )));
    }
    if !kernel.is_bounded() {
        return Err(Error::Precondition(
            "the deficit integral needs a kernel bounded at the origin".into(),
        ));
    }
    let reflected = shape.reflect(e, lambda)?;
    if shape.dim() == 3 {
        return Ok(0.5 * (h_absolute(&reflected, kernel, p)? - h_absolute(shape, kernel, p)?));
    }
    planar_deficit(shape, &reflected, kernel, e, lambda, p)
}

fn planar_deficit(shape: &Shape, reflected: &Shape, kernel: &Kernel, e: &[f64], lambda: f64, p: &[f64]) -> Result<f64> {
    let x = Vector2::new(p[0], p[1]);
    let rp = reflect_point(p, e, lambda);
    let c = Vector2::new(rp[0], rp[1]);
    let dist = (c - x).norm();
    let s_far = shape.farthest_distance(p)?.max(reflected.farthest_distance(p)?);
    let floor = 1e-9 * shape.diameter();
    let kernel_breaks = kernel.measure().breakpoints_in(floor, s_far + dist);

    let mut outer = vec![0.0, s_far];
    for set in [shape, reflected] {
        if let Some(radii) = set.critical_radii(p)? {
            outer.extend(radii);
        }
    }
    for &b in &kernel_breaks {
        outer.extend([b, (b - dist).abs(), b + dist]);
    }
    outer.retain(|r| *r >= 0.0 && *r <= s_far);
    outer.sort_by(f64::total_cmp);
    outer.dedup_by(|b, a| *b - *a <= 1e-14 * s_far);

    let scale = kernel.limit_at_zero() * shape.volume();
    let inner_opts = QuadOptions::with_tolerances(1e-14 * kernel.limit_at_zero(), 1e-11);
    let outer_opts = QuadOptions {
        max_subdivisions: 2000,
        ..QuadOptions::with_tolerances(1e-12 * scale, 1e-10)
    };
    let mut ev_e = shape.evaluator(p)?;
    let mut ev_f = reflected.evaluator(p)?;
    let mut total = 0.0;
    for w in outer.windows(2) {
        let q = gauss_kronrod(
            |s| {
                if s <= 0.0 {
                    return 0.0;
                }
                let mut crossings: Vec<Crossing> = ev_e.circle_crossings(s);
                crossings.extend(ev_f.circle_crossings(s));
                for &b in &kernel_breaks {
                    if let Some(pair) = circle_circle(x, s, c, b) {
                        crossings.extend(pair);
                    }
                }
                normalize_crossings(&mut crossings);
                let js = kernel.eval_j(s).unwrap_or(0.0);
                let mut sum = 0.0;
                for arc in arcs(&crossings) {
                    let mid = x + s * arc.mid_direction();
                    let m = [mid.x, mid.y];
                    if !(shape.contains(&m) && !reflected.contains(&m)) {
                        continue;
                    }
                    let g = |phi: f64| {
                        let (sn, cs) = phi.sin_cos();
                        let y = x + s * Vector2::new(cs, sn);
                        js - kernel.eval_j((c - y).norm()).unwrap_or(0.0)
                    };
                    sum += s * gauss_kronrod(g, arc.start, arc.start + arc.sweep, &inner_opts).value;
                }
                sum
            },
            w[0],
            w[1],
            &outer_opts,
        );
        total += q.value;
    }
    Ok(total)
}

/// Per-direction result of the moving-plane procedure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalPlaneReport {
    pub direction: Vec<f64>,
    pub s_max: f64,
    pub lambda_star: f64,
    pub tol_lambda: f64,
    pub classification: Classification,
    pub sym_diff: SymmetricDifference,
    /// Deficit at the touching point, when there is one and the kernel is bounded.
    pub deficit: Option<f64>,
}

/// Runs the moving plane in direction `e`. `stream` picks the Monte-Carlo substream.
pub fn critical_plane_report(
    shape: &Shape,
    e: &[f64],
    kernel: Option<&Kernel>,
    opts: &MovingPlaneOptions,
    stream: u32,
) -> Result<CriticalPlaneReport> {
    let top = s_max(shape, e)?;
    let tol = opts.tol_lambda_for(shape);
    let lambda_star = critical_lambda_with(shape, e, opts)?;
    let classification = classify_critical(shape, e, lambda_star, tol)?;
    let sym_diff = symmetric_difference_with(shape, e, lambda_star, opts.mc_samples, opts.seed, stream)?;
    let deficit = match (kernel, classification.touching_point()) {
        (Some(k), Some(t)) if k.is_bounded() => reflection_deficit(shape, k, e, lambda_star, t).ok(),
        _ => None,
    };
    Ok(CriticalPlaneReport {
        direction: e.to_vec(),
        s_max: top,
        lambda_star,
        tol_lambda: tol,
        classification,
        sym_diff,
        deficit,
    })
}

/// Reports for several directions, computed in parallel and returned in order.
pub fn critical_plane_reports(
    shape: &Shape,
    directions: &[Vec<f64>],
    kernel: Option<&Kernel>,
    opts: &MovingPlaneOptions,
) -> Result<Vec<CriticalPlaneReport>> {
    directions
        .par_iter()
        .enumerate()
        .map(|(i, e)| critical_plane_report(shape, e, kernel, opts, i as u32))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Constant curvature and every tested reflection is a symmetry.
    ConsistentWithBall,
    /// Constant curvature, yet some critical reflection is not a symmetry.
    ConstantCurvatureAsymmetric,
    CurvatureNotConstant,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlexandrovReport {
    pub curvature: ConstancyReport,
    pub planes: Vec<CriticalPlaneReport>,
    pub nondegenerate: bool,
    pub verdict: Verdict,
    pub caveat: Option<String>,
    pub seed: u64,
}

/// Combines the curvature profile with critical-plane reports.
/// Never concludes more than consistency with a ball at the given tolerance.
pub fn alexandrov_probe(
    shape: &Shape,
    kernel: &Kernel,
    directions: &[Vec<f64>],
    tol: f64,
    n_points: usize,
    opts: &MovingPlaneOptions,
) -> Result<AlexandrovReport> {
    let profile = curvature_profile_with(shape, kernel, n_points, &PvOptions::with_tol(tol.min(1e-6)))?;
    let summary: Vec<(f64, f64, bool)> = profile
        .entries
        .iter()
        .map(|e| (e.result.value, e.result.error_estimate, e.result.converged))
        .collect();
    let curvature = constancy_report(&summary, tol);
    let planes = critical_plane_reports(shape, directions, Some(kernel), opts)?;
    let constant = curvature.spread <= tol * curvature.mean.abs();
    let symmetric = planes.iter().all(|r| r.sym_diff.is_negligible(shape.volume()));
    let verdict = match (constant, symmetric) {
        (true, true) => Verdict::ConsistentWithBall,
        (true, false) => Verdict::ConstantCurvatureAsymmetric,
        (false, _) => Verdict::CurvatureNotConstant,
    };
    let nondegenerate = kernel.check_j_at_zero();
    let caveat = (!nondegenerate).then(|| {
        "kernel is constant near the origin: constant curvature does not force a ball for small sets".to_string()
    });
    Ok(AlexandrovReport {
        curvature,
        planes,
        nondegenerate,
        verdict,
        caveat,
        seed: opts.seed,
    })
}
