//! Nonlocal mean curvature
//! `H(x) = PV int chi(y) j(|x - y|) dy`, `chi = 1_{E^c} - 1_E`,
//! its truncations, gradient and tangential derivative.
//!
//! Sign convention: the complement counts `+1`, so convex sets have positive
//! far-field contributions. Everything is evaluated in shell form,
//! `H_eps(x) = int_eps^{s_far} j(s) m0(x, s) ds + T(s_far)`, where `m0`, `m1`
//! are sphere moments, `s_far` the farthest distance from `x` to the set and
//! `T(R) = int_{|z| >= R} j` the kernel's tail volume.
//!
//! Derivatives use `z = y - x`:
//! `grad H_eps(x) = int_{(eps, inf)} s^-1 m1(x, s) nu(ds) - eps^-1 j(eps) m1(x, eps)`,
//! and the tangential derivative along `v` is the limit of
//! `int_{(eps, inf)} s^-1 m1(x, s) . v nu(ds)`, whose boundary term vanishes
//! in the limit. Both signs are checked against finite differences.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::numerics::{gauss_kronrod, integrate_piecewise, OrderModel, QuadOptions, Quadrature, Richardson};
use crate::shapes::{sphere_area, BoundaryPoint, MomentEvaluator, RawMoments, Shape};

/// Budget of epsilon levels.
pub const DEFAULT_MAX_LEVELS: usize = 24;
/// Levels computed before convergence may be declared.
pub const DEFAULT_MIN_LEVELS: usize = 3;
/// First truncation radius, as a fraction of the diameter.
pub const DEFAULT_EPS0_FRACTION: f64 = 0.1;

const RICHARDSON_COLUMNS: usize = 4;
// inner shell quadrature tolerance, relative to a magnitude of the integrand
const INNER_REL_TOL: f64 = 1e-13;
// how far from the boundary (relative to the diameter) a point may sit and
// still count as a boundary point
const ON_BOUNDARY_TOL: f64 = 1e-8;

/// Controls for the principal-value limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PvOptions {
    /// Stop once consecutive extrapolants agree to `tol` relative.
    pub tol: f64,
    pub max_levels: usize,
    pub min_levels: usize,
    pub eps0_fraction: f64,
}

impl Default for PvOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_levels: DEFAULT_MAX_LEVELS,
            min_levels: DEFAULT_MIN_LEVELS,
            eps0_fraction: DEFAULT_EPS0_FRACTION,
        }
    }
}

impl PvOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidParameter(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.max_levels < self.min_levels.max(1) {
            return Err(Error::InvalidParameter("max_levels must be at least min_levels".into()));
        }
        if !(self.eps0_fraction > 0.0) {
            return Err(Error::InvalidParameter("eps0_fraction must be positive".into()));
        }
        Ok(())
    }
}

/// A principal-value limit together with the sequence that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureResult {
    pub value: f64,
    /// Decreasing geometric truncation radii.
    pub epsilons: Vec<f64>,
    /// Truncated values, one per radius.
    pub raw_values: Vec<f64>,
    pub extrapolated: f64,
    /// Never zero: at least a few ulps of the value.
    pub error_estimate: f64,
    /// Radius beyond which the far field is closed by the tail volume.
    pub truncation_radius: f64,
    pub converged: bool,
    /// Leading error exponent used or fitted, if any.
    pub order: Option<f64>,
}

impl CurvatureResult {
    pub fn eps_min(&self) -> f64 {
        self.epsilons.last().copied().unwrap_or(f64::NAN)
    }
}

fn check_pair(shape: &Shape, kernel: &Kernel) -> Result<()> {
    if shape.dim() != kernel.dim() {
        return Err(Error::DimensionMismatch {
            kernel: kernel.dim(),
            shape: shape.dim(),
        });
    }
    Ok(())
}

fn check_admissible(kernel: &Kernel) -> Result<()> {
    let report = kernel.check_levy();
    if !report.admissible {
        return Err(Error::InadmissibleKernel(format!(
            "integrability fails for beta = {} (near-origin integral {}, tail integral {})",
            report.beta, report.near_origin_integral, report.tail_integral
        )));
    }
    Ok(())
}

fn check_on_boundary(shape: &Shape, x: &[f64]) -> Result<()> {
    let d = shape.signed_distance_estimate(x)?;
    if d.abs() > ON_BOUNDARY_TOL * shape.diameter() {
        return Err(Error::Precondition(format!(
            "point is not on the boundary (signed distance {d:e})"
        )));
    }
    Ok(())
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Domain(format!("truncation radius must be positive, got {eps}")));
    }
    Ok(())
}

/// `int_{(lo, hi]} sigma(S_s) nu(ds)`: the size of the derivative integrands.
fn nu_sphere_mass(kernel: &Kernel, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let d = kernel.dim();
    let measure = kernel.measure();
    let mut total = 0.0;
    measure.for_each_atom_in(lo, hi, |a| total += a.mass * sphere_area(d, a.location));
    if measure.has_density() {
        let breaks = measure.breakpoints_in(lo, hi);
        let q = integrate_piecewise(
            |s| measure.density(s) * sphere_area(d, s),
            lo,
            hi,
            &breaks,
            &QuadOptions::with_tolerances(0.0, 1e-10),
        );
        total += q.value;
    }
    total
}

/// Radial integrals of sphere moments about a fixed center.
struct Shells<'a> {
    kernel: &'a Kernel,
    ev: MomentEvaluator<'a>,
    s_far: f64,
    critical: Option<Vec<f64>>,
    dim: usize,
}

impl<'a> Shells<'a> {
    fn new(shape: &'a Shape, kernel: &'a Kernel, x: &[f64]) -> Result<Self> {
        check_pair(shape, kernel)?;
        Ok(Self {
            kernel,
            ev: shape.evaluator(x)?,
            s_far: shape.farthest_distance(x)?,
            critical: shape.critical_radii(x)?,
            dim: shape.dim(),
        })
    }

    fn breaks(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut b = self.kernel.measure().breakpoints_in(lo, hi);
        if let Some(c) = &self.critical {
            b.extend(c.iter().copied().filter(|r| *r > lo && *r < hi));
        }
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    /// `int_lo^hi f(s, moments(s)) ds`, split where the moments or the
    /// kernel lose smoothness; `magnitude` sets the absolute tolerance.
    fn quad<F: FnMut(f64, &RawMoments) -> f64>(&mut self, lo: f64, hi: f64, magnitude: f64, mut f: F) -> Quadrature {
        let hi = hi.min(self.s_far);
        if hi <= lo {
            return Quadrature {
                value: 0.0,
                error: 0.0,
                evaluations: 0,
                converged: true,
            };
        }
        let breaks = self.breaks(lo, hi);
        let ev = &mut self.ev;
        let mut g = |s: f64| {
            let m = ev.eval_unchecked(s);
            f(s, &m)
        };
        if self.critical.is_some() {
            let opts = QuadOptions::with_tolerances(INNER_REL_TOL * magnitude, INNER_REL_TOL);
            integrate_piecewise(g, lo, hi, &breaks, &opts)
        } else {
            // unknown kinks: adaptive Gauss-Kronrod on each smooth piece of the kernel
            let opts = QuadOptions {
                max_subdivisions: 2000,
                ..QuadOptions::with_tolerances(1e-10 * magnitude, 1e-10)
            };
            let mut nodes = vec![lo];
            nodes.extend(breaks);
            nodes.push(hi);
            let mut out = Quadrature {
                value: 0.0,
                error: 0.0,
                evaluations: 0,
                converged: true,
            };
            for w in nodes.windows(2) {
                let q = gauss_kronrod(&mut g, w[0], w[1], &opts);
                out.value += q.value;
                out.error += q.error;
                out.evaluations += q.evaluations;
                out.converged &= q.converged;
            }
            out
        }
    }

    /// `int_lo^hi j(s) m0(s) ds`.
    fn h_shell(&mut self, lo: f64, hi: f64) -> Result<f64> {
        let k = self.kernel;
        let magnitude = k.tail_volume(lo)? - k.tail_volume(hi.max(lo))?;
        Ok(self.quad(lo, hi, magnitude.abs(), |s, m| k.j(s) * m.m0).value)
    }

    /// `int_{(lo, hi]} s^-1 (m1 . w) nu(ds)`.
    fn nu_shell(&mut self, lo: f64, hi: f64, w: &[f64; 3]) -> f64 {
        let hi = hi.min(self.s_far);
        if hi <= lo {
            return 0.0;
        }
        let dot = |m: &RawMoments| m.m1[0] * w[0] + m.m1[1] * w[1] + m.m1[2] * w[2];
        let mut atoms = Vec::new();
        self.kernel.measure().for_each_atom_in(lo, hi, |a| atoms.push(a));
        let mut total = 0.0;
        for a in atoms {
            let m = self.ev.eval_unchecked(a.location);
            total += a.mass / a.location * dot(&m);
        }
        let measure = self.kernel.measure();
        if measure.has_density() {
            let wn = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
            let magnitude = wn * nu_sphere_mass(self.kernel, lo, hi);
            total += self.quad(lo, hi, magnitude, |s, m| measure.density(s) / s * dot(m)).value;
        }
        total
    }

    fn unit(&self, i: usize) -> [f64; 3] {
        let mut e = [0.0; 3];
        e[i] = 1.0;
        e
    }
}

/// Truncated curvature `H_eps(x) = int_{|z| >= eps} chi(x + z) j(|z|) dz`.
pub fn h_epsilon(shape: &Shape, kernel: &Kernel, x: &[f64], eps: f64) -> Result<f64> {
    check_eps(eps)?;
    let mut shells = Shells::new(shape, kernel, x)?;
    if eps >= shells.s_far {
        return kernel.tail_volume(eps);
    }
    let far = kernel.tail_volume(shells.s_far)?;
    Ok(far + shells.h_shell(eps, shells.s_far)?)
}

/// Gradient of `H_eps` in `x`.
pub fn grad_h_epsilon(shape: &Shape, kernel: &Kernel, x: &[f64], eps: f64) -> Result<Vec<f64>> {
    check_eps(eps)?;
    let mut shells = Shells::new(shape, kernel, x)?;
    let d = shells.dim;
    if eps >= shells.s_far {
        return Ok(vec![0.0; d]);
    }
    let boundary = shells.ev.eval_unchecked(eps);
    let jeps = kernel.j(eps);
    let s_far = shells.s_far;
    Ok((0..d)
        .map(|i| {
            let e = shells.unit(i);
            shells.nu_shell(eps, s_far, &e) - jeps / eps * boundary.m1[i]
        })
        .collect())
}

/// Full integral `int chi(x + z) j(|z|) dz` for kernels bounded at the origin,
/// valid at any point (no principal value needed).
pub fn h_absolute(shape: &Shape, kernel: &Kernel, x: &[f64]) -> Result<f64> {
    if !kernel.is_bounded() {
        return Err(Error::Precondition(
            "the absolute integral needs a kernel bounded at the origin".into(),
        ));
    }
    let mut shells = Shells::new(shape, kernel, x)?;
    let far = kernel.tail_volume(shells.s_far)?;
    let k = kernel;
    let magnitude = k.limit_at_zero() * shape.volume().max(sphere_area(shells.dim, shells.s_far) * shells.s_far);
    Ok(far + shells.quad(0.0, shells.s_far, magnitude, |s, m| k.j(s) * m.m0).value)
}

fn pv_model(kernel: &Kernel, leading: f64) -> OrderModel {
    if kernel.has_declared_order() && leading.is_finite() && leading > 0.0 {
        OrderModel::Declared { leading, step: 1.0 }
    } else {
        OrderModel::Fitted
    }
}

/// Drives the dyadic epsilon sequence. `shell(lo, hi)` returns the change of
/// the truncated quantity when the cutoff moves from `hi` down to `lo`.
fn run_pv<F: FnMut(f64, f64) -> Result<f64>>(
    eps0: f64,
    s_far: f64,
    opts: &PvOptions,
    model: OrderModel,
    base: f64,
    reference: f64,
    mut shell: F,
) -> Result<CurvatureResult> {
    let mut rich = Richardson::new(2.0, model, RICHARDSON_COLUMNS);
    let mut epsilons = Vec::new();
    let mut raw = Vec::new();
    let mut acc = base;
    let mut best = None;
    let mut converged = false;
    for k in 0..opts.max_levels {
        let eps = eps0 * 0.5f64.powi(k as i32);
        if k > 0 {
            acc += shell(eps, 2.0 * eps)?;
        }
        epsilons.push(eps);
        raw.push(acc);
        let ext = rich.push(acc);
        let scale = ext.value.abs().max(reference);
        let error = ext.error.max(4.0 * f64::EPSILON * ext.value.abs()).max(f64::MIN_POSITIVE);
        best = Some((ext.value, error, ext.order));
        if k + 1 >= opts.min_levels && error <= opts.tol * scale {
            converged = true;
            break;
        }
    }
    let (value, error_estimate, order) = best.expect("at least one level");
    Ok(CurvatureResult {
        value,
        epsilons,
        raw_values: raw,
        extrapolated: value,
        error_estimate,
        truncation_radius: s_far,
        converged,
        order,
    })
}

/// Principal-value curvature at a boundary point.
pub fn nonlocal_mean_curvature(shape: &Shape, kernel: &Kernel, x: &BoundaryPoint, tol: f64) -> Result<CurvatureResult> {
    nonlocal_mean_curvature_with(shape, kernel, &x.position, &PvOptions::with_tol(tol))
}

/// Principal-value curvature at a boundary point given by its coordinates.
pub fn nonlocal_mean_curvature_with(shape: &Shape, kernel: &Kernel, x: &[f64], opts: &PvOptions) -> Result<CurvatureResult> {
    opts.validate()?;
    check_pair(shape, kernel)?;
    check_admissible(kernel)?;
    check_on_boundary(shape, x)?;
    let mut shells = Shells::new(shape, kernel, x)?;
    let s_far = shells.s_far;
    let eps0 = opts.eps0_fraction * shape.diameter();
    let base = if eps0 >= s_far {
        kernel.tail_volume(eps0)?
    } else {
        kernel.tail_volume(s_far)? + shells.h_shell(eps0, s_far)?
    };
    let d = shape.dim() as f64;
    let leading = d + 1.0 + kernel.origin_exponent().min(0.0);
    let model = pv_model(kernel, leading);
    run_pv(eps0, s_far, opts, model, base, base.abs(), |lo, hi| shells.h_shell(lo, hi))
}

/// Derivative of `H` along the tangent vector `v` at a boundary point.
pub fn tangential_derivative(
    shape: &Shape,
    kernel: &Kernel,
    x: &BoundaryPoint,
    v: &[f64],
    tol: f64,
) -> Result<CurvatureResult> {
    tangential_derivative_with(shape, kernel, x, v, &PvOptions::with_tol(tol))
}

pub fn tangential_derivative_with(
    shape: &Shape,
    kernel: &Kernel,
    x: &BoundaryPoint,
    v: &[f64],
    opts: &PvOptions,
) -> Result<CurvatureResult> {
    opts.validate()?;
    check_pair(shape, kernel)?;
    check_admissible(kernel)?;
    let p = &x.position;
    check_on_boundary(shape, p)?;
    if v.len() != shape.dim() || x.normal.len() != shape.dim() {
        return Err(Error::Domain("tangent vector has the wrong dimension".into()));
    }
    let vn: f64 = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    let along: f64 = v.iter().zip(&x.normal).map(|(a, b)| a * b).sum();
    if along.abs() >= 1e-10 * vn {
        return Err(Error::Precondition(format!(
            "vector is not tangent: normal component {along:e} for |v| = {vn:e}"
        )));
    }
    let mut w = [0.0; 3];
    w[..v.len()].copy_from_slice(v);
    let mut shells = Shells::new(shape, kernel, p)?;
    let s_far = shells.s_far;
    let eps0 = opts.eps0_fraction * shape.diameter();
    let base = shells.nu_shell(eps0, s_far, &w);
    let reference = vn * nu_sphere_mass(kernel, eps0, s_far);
    let d = shape.dim() as f64;
    let gamma = kernel.origin_exponent();
    let leading = if gamma.is_finite() { d + 1.0 + gamma } else { d + 2.0 };
    let model = pv_model(kernel, leading);
    run_pv(eps0, s_far, opts, model, base, reference, |lo, hi| Ok(shells.nu_shell(lo, hi, &w)))
}

/// One evaluated boundary point of a profile.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileEntry {
    pub point: BoundaryPoint,
    pub result: CurvatureResult,
}

/// Summary of a curvature profile.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstancyReport {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub spread: f64,
    pub max_error_estimate: f64,
    pub tol: f64,
    pub all_converged: bool,
    /// `spread <= tol |mean| + 2 max_error_estimate`.
    pub constant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureProfile {
    pub entries: Vec<ProfileEntry>,
    pub report: ConstancyReport,
}

/// Flat record of one profile entry: coordinates, parameter, value, error
/// estimate, smallest truncation radius and convergence flag.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureRow {
    pub index: usize,
    pub param: Vec<f64>,
    pub position: Vec<f64>,
    pub value: f64,
    pub error_estimate: f64,
    pub eps_min: f64,
    pub converged: bool,
}

impl CurvatureProfile {
    pub fn rows(&self) -> Vec<CurvatureRow> {
        self.entries
            .iter()
            .enumerate()
            .map(|(index, e)| CurvatureRow {
                index,
                param: e.point.param.clone(),
                position: e.point.position.clone(),
                value: e.result.value,
                error_estimate: e.result.error_estimate,
                eps_min: e.result.eps_min(),
                converged: e.result.converged,
            })
            .collect()
    }
}

pub fn constancy_report(values: &[(f64, f64, bool)], tol: f64) -> ConstancyReport {
    let n = values.len().max(1) as f64;
    let mean = values.iter().map(|v| v.0).sum::<f64>() / n;
    let min = values.iter().map(|v| v.0).fold(f64::INFINITY, f64::min);
    let max = values.iter().map(|v| v.0).fold(f64::NEG_INFINITY, f64::max);
    let max_err = values.iter().map(|v| v.1).fold(0.0, f64::max);
    let spread = max - min;
    ConstancyReport {
        mean,
        min,
        max,
        spread,
        max_error_estimate: max_err,
        tol,
        all_converged: values.iter().all(|v| v.2),
        constant: spread <= tol * mean.abs() + 2.0 * max_err,
    }
}

/// Curvature at `n` sampled boundary points, evaluated in parallel and
/// reported in sampling order.
pub fn curvature_profile(shape: &Shape, kernel: &Kernel, n: usize, tol: f64) -> Result<CurvatureProfile> {
    curvature_profile_with(shape, kernel, n, &PvOptions::with_tol(tol))
}

pub fn curvature_profile_with(shape: &Shape, kernel: &Kernel, n: usize, opts: &PvOptions) -> Result<CurvatureProfile> {
    opts.validate()?;
    check_pair(shape, kernel)?;
    check_admissible(kernel)?;
    let points = shape.boundary_sample(n)?;
    let results: Vec<Result<CurvatureResult>> = points
        .par_iter()
        .map(|p| nonlocal_mean_curvature_with(shape, kernel, &p.position, opts))
        .collect();
    let mut entries = Vec::with_capacity(n);
    for (point, r) in points.into_iter().zip(results) {
        entries.push(ProfileEntry { point, result: r? });
    }
    let summary: Vec<(f64, f64, bool)> = entries
        .iter()
        .map(|e| (e.result.value, e.result.error_estimate, e.result.converged))
        .collect();
    Ok(CurvatureProfile {
        report: constancy_report(&summary, opts.tol),
        entries,
    })
}

/// Exact curvature of a set of diameter below `r0` for a kernel constant on
/// `(0, r0)`: `(|B_r0| - 2|E|) c + T(r0)`, the same at every boundary point.
pub fn closed_form_small_set(shape: &Shape, kernel: &Kernel) -> Result<f64> {
    check_pair(shape, kernel)?;
    let (r0, c) = kernel.plateau().ok_or_else(|| {
        Error::Precondition(format!(
            "kernel `{}` is not constant on a neighbourhood of the origin",
            kernel.name()
        ))
    })?;
    let diam = shape.diameter();
    if diam >= r0 {
        return Err(Error::Precondition(format!(
            "diameter {diam} is not below the plateau radius {r0}"
        )));
    }
    Ok((kernel.ball_volume(r0) - 2.0 * shape.volume()) * c + kernel.tail_volume(r0)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn exp2() -> Kernel {
        Kernel::exponential(2, 1.0, 2.0).unwrap()
    }

    #[test]
    fn tail_only_beyond_far_field() {
        let d = Shape::disk([0.0, 0.0], 1.0).unwrap();
        let k = exp2();
        let h = h_epsilon(&d, &k, &[1.0, 0.0], 2.5).unwrap();
        assert!((h - k.tail_volume(2.5).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn disk_center_has_zero_gradient() {
        let d = Shape::disk([0.0, 0.0], 1.0).unwrap();
        for k in [exp2(), Kernel::truncated_constant(2, 1.0, 1.0, 2.0).unwrap()] {
            let g = grad_h_epsilon(&d, &k, &[0.0, 0.0], 0.3).unwrap();
            assert!(g.iter().all(|c| c.abs() < 1e-14), "{g:?}");
        }
    }

    #[test]
    fn truncated_gradient_reduces_to_two_terms() {
        let e = Shape::ellipse([0.0, 0.0], 1.0, 0.5).unwrap();
        let k = Kernel::truncated_constant(2, 1.0, 1.0, 2.0).unwrap();
        let x = [0.3, 0.1];
        let g = grad_h_epsilon(&e, &k, &x, 0.5).unwrap();
        let m1 = e.sphere_moments(&x, 1.0).unwrap().m1;
        let mh = e.sphere_moments(&x, 0.5).unwrap().m1;
        for i in 0..2 {
            let want = m1[i] - 2.0 * mh[i];
            assert!((g[i] - want).abs() < 1e-13, "{} vs {want}", g[i]);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let e = Shape::ellipse([0.0, 0.0], 1.0, 0.5).unwrap();
        let k = exp2();
        let x = [1.0, 0.0];
        let eps = 0.1;
        let g = grad_h_epsilon(&e, &k, &x, eps).unwrap();
        let h = 1e-5;
        for i in 0..2 {
            let mut p = x;
            let mut m = x;
            p[i] += h;
            m[i] -= h;
            let fd = (h_epsilon(&e, &k, &p, eps).unwrap() - h_epsilon(&e, &k, &m, eps).unwrap()) / (2.0 * h);
            let scale = g[0].hypot(g[1]);
            assert!((g[i] - fd).abs() <= 1e-4 * scale, "component {i}: {} vs {fd}", g[i]);
        }
    }

    #[test]
    fn small_ball_closed_form() {
        let b = Shape::disk([0.0, 0.0], 0.2).unwrap();
        let k = Kernel::truncated_constant(2, 1.0, 1.0, 2.0).unwrap();
        let cf = closed_form_small_set(&b, &k).unwrap();
        assert!((cf - 0.92 * PI).abs() < 1e-14);
        let r = nonlocal_mean_curvature_with(&b, &k, &[0.2, 0.0], &PvOptions::with_tol(1e-10)).unwrap();
        assert!(r.converged);
        assert!((r.value - cf).abs() < 1e-9 * cf, "{} vs {cf}", r.value);
        let e = Shape::ellipse([0.0, 0.0], 0.2, 0.1).unwrap();
        assert!((closed_form_small_set(&e, &k).unwrap() - 0.96 * PI).abs() < 1e-14);
        let k2 = Kernel::truncated_constant(2, 2.0, 1.0, 2.0).unwrap();
        assert!((closed_form_small_set(&e, &k2).unwrap() - 1.92 * PI).abs() < 1e-13);
        let big = Shape::disk([0.0, 0.0], 0.6).unwrap();
        assert!(matches!(closed_form_small_set(&big, &k), Err(Error::Precondition(_))));
        assert!(closed_form_small_set(&b, &exp2()).is_err());
    }

    #[test]
    fn ball_tangential_derivative_vanishes() {
        let d = Shape::disk([0.3, -0.2], 1.0).unwrap();
        let k = exp2();
        let bp = d.boundary_point(&[0.7]).unwrap();
        let r = tangential_derivative(&d, &k, &bp, &bp.tangents[0], 1e-8).unwrap();
        assert!(r.value.abs() < 1e-10, "{}", r.value);
    }

    #[test]
    fn rejects_bad_inputs() {
        let d = Shape::disk([0.0, 0.0], 1.0).unwrap();
        let k3 = Kernel::exponential(3, 1.0, 2.0).unwrap();
        assert!(matches!(h_epsilon(&d, &k3, &[1.0, 0.0], 0.1), Err(Error::DimensionMismatch { .. })));
        assert!(h_epsilon(&d, &exp2(), &[1.0, 0.0], 0.0).is_err());
        let bad = Kernel::fractional(2, 0.5, 1.2).unwrap();
        let bp = d.boundary_point(&[0.0]).unwrap();
        assert!(matches!(nonlocal_mean_curvature(&d, &bad, &bp, 1e-6), Err(Error::InadmissibleKernel(_))));
        let inside = BoundaryPoint {
            position: vec![0.5, 0.0],
            ..bp.clone()
        };
        assert!(matches!(nonlocal_mean_curvature(&d, &exp2(), &inside, 1e-6), Err(Error::Precondition(_))));
        assert!(tangential_derivative(&d, &exp2(), &bp, &[1.0, 0.0], 1e-6).is_err());
    }

    #[test]
    fn fractional_disk_profile_is_flat() {
        let d = Shape::disk([0.0, 0.0], 1.0).unwrap();
        let k = Kernel::fractional(2, 0.5, 1.8).unwrap();
        let p = curvature_profile(&d, &k, 6, 1e-6).unwrap();
        assert!(p.report.all_converged, "{:?}", p.report);
        assert!(p.report.spread <= 1e-6 * p.report.mean.abs());
        assert!(p.report.mean > 0.0);
    }
}
