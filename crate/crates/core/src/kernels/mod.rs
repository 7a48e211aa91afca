//! Radial, radially non-increasing kernels represented through their tail
//! measures.
//!
//! Every kernel stores a positive measure `nu` on `(0, inf)` and evaluates its
//! profile as `j(r) = nu((r, inf))`, so `j` is right-continuous at jumps. The
//! zoo members additionally keep their defining parameters, which lets the
//! admissibility check and the far-field volume use closed forms.

mod measure;
pub(crate) mod spec;

pub use measure::{Atom, AtomFamily, DensityTerm, TailMeasure};
pub use spec::KernelSpec;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{gauss_kronrod, integrate_piecewise, tanh_sinh, unit_ball_volume, unit_sphere_area, QuadOptions};

/// Blow-up threshold for the quadrature-based admissibility heuristic.
pub const LEVY_BLOWUP_THRESHOLD: f64 = 1e12;

/// Parameters of a kernel zoo member.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelFamily {
    /// `j(r) = r^(-d-alpha)`.
    Fractional { alpha: f64 },
    /// `j = c` on `(0, r0)`, zero from `r0` on.
    TruncatedConstant { c: f64, r0: f64 },
    /// `j(r) = sum_n b_n 1{r < a_n}` with `a_n = a q^(n-1)` and `b_n = b0 rho^n`.
    StepGeometric { a: f64, q: f64, b0: f64, b_ratio: f64 },
    /// `j(r) = amplitude * exp(-rate r)`.
    Exponential { rate: f64, amplitude: f64 },
    /// Strictly decreasing samples, interpolated linearly in log-log, extended
    /// by the first segment's power law towards the origin and cut to zero at
    /// the last sample radius.
    Table { samples: Vec<(f64, f64)> },
    /// Nonnegative combination of other kernels.
    Combination(Vec<(f64, Kernel)>),
}

/// How the admissibility verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LevyMethod {
    Analytic,
    Heuristic,
}

/// Radial form of the integrability condition
/// `int_{|x|<1} |x|^(beta-1) j + int_{|x|>=1} j < inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevyReport {
    pub beta: f64,
    /// `omega_{d-1} int_0^1 r^(beta+d-2) j(r) dr`, infinite when divergent.
    pub near_origin_integral: f64,
    /// `int_{|x|>=1} j(x) dx`, infinite when divergent.
    pub tail_integral: f64,
    pub admissible: bool,
    pub method: LevyMethod,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    dim: usize,
    beta: f64,
    family: KernelFamily,
    measure: TailMeasure,
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta <= 2.0) {
        return Err(Error::InvalidParameter(format!("beta must lie in (0, 2], got {beta}")));
    }
    Ok(())
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidParameter("dimension must be at least 1".into()));
    }
    Ok(())
}

impl Kernel {
    pub fn fractional(dim: usize, alpha: f64, beta: f64) -> Result<Self> {
        check_dim(dim)?;
        check_beta(beta)?;
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        let s = dim as f64 + alpha;
        let measure = TailMeasure::new(
            vec![],
            vec![DensityTerm::Power {
                coeff: s,
                exponent: -s - 1.0,
                lo: 0.0,
                hi: f64::INFINITY,
            }],
        )?;
        Ok(Self {
            dim,
            beta,
            family: KernelFamily::Fractional { alpha },
            measure,
        })
    }

    pub fn truncated_constant(dim: usize, c: f64, r0: f64, beta: f64) -> Result<Self> {
        check_dim(dim)?;
        check_beta(beta)?;
        if !(c > 0.0 && r0 > 0.0 && r0.is_finite()) {
            return Err(Error::InvalidParameter("truncated_constant needs c > 0 and r0 > 0".into()));
        }
        let measure = TailMeasure::new(vec![AtomFamily::Finite(vec![Atom { location: r0, mass: c }])], vec![])?;
        Ok(Self {
            dim,
            beta,
            family: KernelFamily::TruncatedConstant { c, r0 },
            measure,
        })
    }

    /// Step family with `a_n = a q^(n-1)` and `b_n = b0 * b_ratio^n`.
    ///
    /// Fails unless `sum_n b_n a_n^(beta+d-1) < inf`, which is the radial form
    /// of the integrability condition for this family.
    pub fn step_geometric(dim: usize, a: f64, q: f64, b0: f64, b_ratio: f64, beta: f64) -> Result<Self> {
        check_dim(dim)?;
        check_beta(beta)?;
        if !(a > 0.0 && q > 0.0 && q < 1.0 && b0 > 0.0 && b_ratio > 0.0) {
            return Err(Error::InvalidParameter(
                "step_geometric needs a > 0, q in (0, 1), b0 > 0, b_ratio > 0".into(),
            ));
        }
        let series_ratio = b_ratio * q.powf(beta + dim as f64 - 1.0);
        if series_ratio >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "step family violates sum b_n a_n^(beta+d-1) < inf (series ratio {series_ratio} >= 1)"
            )));
        }
        let measure = TailMeasure::new(
            vec![AtomFamily::Geometric {
                first: a,
                ratio: q,
                mass0: b0,
                mass_ratio: b_ratio,
            }],
            vec![],
        )?;
        Ok(Self {
            dim,
            beta,
            family: KernelFamily::StepGeometric { a, q, b0, b_ratio },
            measure,
        })
    }

    pub fn exponential(dim: usize, rate: f64, beta: f64) -> Result<Self> {
        Self::exponential_scaled(dim, rate, 1.0, beta)
    }

    pub fn exponential_scaled(dim: usize, rate: f64, amplitude: f64, beta: f64) -> Result<Self> {
        check_dim(dim)?;
        check_beta(beta)?;
        if !(rate > 0.0 && amplitude > 0.0) {
            return Err(Error::InvalidParameter("exponential needs rate > 0 and amplitude > 0".into()));
        }
        let measure = TailMeasure::new(
            vec![],
            vec![DensityTerm::Exponential {
                coeff: amplitude * rate,
                rate,
            }],
        )?;
        Ok(Self {
            dim,
            beta,
            family: KernelFamily::Exponential { rate, amplitude },
            measure,
        })
    }

    pub fn table(dim: usize, samples: Vec<(f64, f64)>, beta: f64) -> Result<Self> {
        check_dim(dim)?;
        check_beta(beta)?;
        if samples.len() < 2 {
            return Err(Error::InvalidParameter("table kernel needs at least two samples".into()));
        }
        for w in samples.windows(2) {
            let ((r0, j0), (r1, j1)) = (w[0], w[1]);
            if !(r0 > 0.0 && r1 > r0) {
                return Err(Error::InvalidParameter("table radii must be positive and strictly increasing".into()));
            }
            if !(j1 > 0.0 && j0 > j1) {
                return Err(Error::InvalidParameter("table values must be positive and strictly decreasing".into()));
            }
        }
        let slopes = table_slopes(&samples);
        let mut density = Vec::with_capacity(samples.len());
        let (r0, j0) = samples[0];
        let k0 = slopes[0];
        density.push(DensityTerm::Power {
            coeff: -k0 * j0 * r0.powf(-k0),
            exponent: k0 - 1.0,
            lo: 0.0,
            hi: r0,
        });
        for (i, w) in samples.windows(2).enumerate() {
            let (ri, ji) = w[0];
            let k = slopes[i];
            density.push(DensityTerm::Power {
                coeff: -k * ji * ri.powf(-k),
                exponent: k - 1.0,
                lo: ri,
                hi: w[1].0,
            });
        }
        let &(rn, jn) = samples.last().unwrap();
        let measure = TailMeasure::new(vec![AtomFamily::Finite(vec![Atom { location: rn, mass: jn }])], density)?;
        Ok(Self {
            dim,
            beta,
            family: KernelFamily::Table { samples },
            measure,
        })
    }

    /// `sum_i w_i j_i` for nonnegative weights; all parts must share `dim`.
    pub fn combine(parts: Vec<(f64, Kernel)>, beta: f64) -> Result<Self> {
        check_beta(beta)?;
        let Some(first) = parts.first() else {
            return Err(Error::InvalidParameter("combination needs at least one kernel".into()));
        };
        let dim = first.1.dim;
        for (w, k) in &parts {
            if !(*w >= 0.0 && w.is_finite()) {
                return Err(Error::InvalidParameter("combination weights must be nonnegative".into()));
            }
            if k.dim != dim {
                return Err(Error::InvalidParameter("combined kernels must share the dimension".into()));
            }
        }
        let measure = TailMeasure::merged(parts.iter().filter(|(w, _)| *w > 0.0).map(|(w, k)| k.measure.scaled(*w)));
        Ok(Self {
            dim,
            beta,
            family: KernelFamily::Combination(parts),
            measure,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn family(&self) -> &KernelFamily {
        &self.family
    }

    pub fn measure(&self) -> &TailMeasure {
        &self.measure
    }

    /// Same kernel with a different regularity exponent.
    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        check_beta(beta)?;
        if let KernelFamily::StepGeometric { a, q, b0, b_ratio } = self.family {
            return Self::step_geometric(self.dim, a, q, b0, b_ratio, beta);
        }
        Ok(Self { beta, ..self.clone() })
    }

    pub fn name(&self) -> &'static str {
        match self.family {
            KernelFamily::Fractional { .. } => "fractional",
            KernelFamily::TruncatedConstant { .. } => "truncated_constant",
            KernelFamily::StepGeometric { .. } => "step_geometric",
            KernelFamily::Exponential { .. } => "exponential",
            KernelFamily::Table { .. } => "table",
            KernelFamily::Combination(_) => "combination",
        }
    }

    /// `j(r) = nu((r, inf))`.
    pub fn eval_j(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("kernel profile is defined for r > 0, got {r}")));
        }
        Ok(self.j(r))
    }

    /// Profile without the domain check; callers guarantee `r > 0`.
    pub(crate) fn j(&self, r: f64) -> f64 {
        self.measure.tail(r)
    }

    /// The zoo member's defining formula, evaluated directly from its
    /// parameters rather than through the tail measure.
    pub fn reference_profile(&self, r: f64) -> f64 {
        match &self.family {
            KernelFamily::Fractional { alpha } => r.powf(-(self.dim as f64) - alpha),
            KernelFamily::TruncatedConstant { c, r0 } => {
                if r < *r0 {
                    *c
                } else {
                    0.0
                }
            }
            KernelFamily::StepGeometric { a, q, b0, b_ratio } => {
                let mut sum = 0.0;
                let mut n = 1;
                loop {
                    let an = a * q.powi(n - 1);
                    if an <= r {
                        break;
                    }
                    sum += b0 * b_ratio.powi(n);
                    n += 1;
                }
                sum
            }
            KernelFamily::Exponential { rate, amplitude } => amplitude * (-rate * r).exp(),
            KernelFamily::Table { samples } => table_interpolate(samples, r),
            KernelFamily::Combination(parts) => parts.iter().map(|(w, k)| w * k.reference_profile(r)).sum(),
        }
    }

    /// Largest radius beyond which `j` vanishes, or infinity.
    pub fn support_radius(&self) -> f64 {
        match &self.family {
            KernelFamily::Fractional { .. } | KernelFamily::Exponential { .. } => f64::INFINITY,
            KernelFamily::TruncatedConstant { r0, .. } => *r0,
            KernelFamily::StepGeometric { a, .. } => *a,
            KernelFamily::Table { samples } => samples.last().unwrap().0,
            KernelFamily::Combination(parts) => parts
                .iter()
                .filter(|(w, _)| *w > 0.0)
                .map(|(_, k)| k.support_radius())
                .fold(0.0, f64::max),
        }
    }

    /// Exponent `sigma` of the singularity `j(r) ~ r^(-sigma)` at the origin;
    /// zero for bounded kernels.
    pub fn singularity_exponent(&self) -> f64 {
        match &self.family {
            KernelFamily::Fractional { alpha } => self.dim as f64 + alpha,
            KernelFamily::TruncatedConstant { .. } | KernelFamily::Exponential { .. } => 0.0,
            KernelFamily::StepGeometric { q, b_ratio, .. } => {
                if *b_ratio > 1.0 {
                    b_ratio.ln() / (1.0 / q).ln()
                } else {
                    0.0
                }
            }
            KernelFamily::Table { samples } => (-table_slopes(samples)[0]).max(0.0),
            KernelFamily::Combination(parts) => parts
                .iter()
                .filter(|(w, _)| *w > 0.0)
                .map(|(_, k)| k.singularity_exponent())
                .fold(0.0, f64::max),
        }
    }

    /// Whether `H_eps - H` follows a power expansion `eps^(p0 + k)` along
    /// dyadic sequences. Step families mix the exponents of the atom masses
    /// and of the plateau, and incommensurate spacings add log-periodic
    /// wobble, so they use a fitted order.
    pub fn has_declared_order(&self) -> bool {
        match &self.family {
            KernelFamily::StepGeometric { .. } => false,
            KernelFamily::Combination(parts) => parts.iter().all(|(_, k)| k.has_declared_order()),
            _ => true,
        }
    }

    /// Exponent `gamma` of the profile at the origin: `j(r) ~ r^gamma` when
    /// `gamma < 0`, and `j(0+) - j(r) ~ r^gamma` when `gamma > 0`. Infinite when
    /// `j` is constant near the origin.
    pub fn origin_exponent(&self) -> f64 {
        match &self.family {
            KernelFamily::Fractional { alpha } => -(self.dim as f64) - alpha,
            KernelFamily::TruncatedConstant { .. } => f64::INFINITY,
            KernelFamily::StepGeometric { q, b_ratio, .. } => (1.0 / b_ratio).ln() / (1.0 / q).ln(),
            KernelFamily::Exponential { .. } => 1.0,
            KernelFamily::Table { samples } => table_slopes(samples)[0],
            KernelFamily::Combination(parts) => parts
                .iter()
                .filter(|(w, _)| *w > 0.0)
                .map(|(_, k)| k.origin_exponent())
                .fold(f64::INFINITY, f64::min),
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.limit_at_zero().is_finite()
    }

    /// `lim_{r -> 0} j(r)`, i.e. the total mass of `nu`.
    pub fn limit_at_zero(&self) -> f64 {
        match &self.family {
            KernelFamily::Fractional { .. } | KernelFamily::Table { .. } => f64::INFINITY,
            KernelFamily::StepGeometric { b0, b_ratio, .. } => {
                if *b_ratio < 1.0 {
                    b0 * b_ratio / (1.0 - b_ratio)
                } else {
                    f64::INFINITY
                }
            }
            KernelFamily::TruncatedConstant { c, .. } => *c,
            KernelFamily::Exponential { amplitude, .. } => *amplitude,
            KernelFamily::Combination(parts) => parts
                .iter()
                .filter(|(w, _)| *w > 0.0)
                .map(|(w, k)| w * k.limit_at_zero())
                .sum(),
        }
    }

    /// Non-degeneracy at the origin: `lim_{r -> 0} j(r) > j(rho)` for every
    /// `rho > 0`, equivalently `nu((0, rho]) > 0` for all `rho > 0`.
    pub fn check_j_at_zero(&self) -> bool {
        self.measure.support_infimum() == 0.0
    }

    /// If `j` is constant on `(0, r0)`, returns `(r0, value)` with the largest
    /// such `r0`.
    pub fn plateau(&self) -> Option<(f64, f64)> {
        let r0 = self.measure.support_infimum();
        if r0 > 0.0 && r0.is_finite() {
            Some((r0, self.limit_at_zero()))
        } else {
            None
        }
    }

    /// `int_{|z| >= radius} j(|z|) dz`.
    pub fn tail_volume(&self, radius: f64) -> Result<f64> {
        if !(radius > 0.0) {
            return Err(Error::Domain(format!("tail volume needs a positive radius, got {radius}")));
        }
        let d = self.dim as f64;
        let omega = unit_sphere_area(self.dim);
        let value = match &self.family {
            KernelFamily::Fractional { alpha } => omega * radius.powf(-alpha) / alpha,
            KernelFamily::TruncatedConstant { c, r0 } => {
                if radius >= *r0 {
                    0.0
                } else {
                    c * omega / d * (r0.powf(d) - radius.powf(d))
                }
            }
            KernelFamily::StepGeometric { .. } => {
                let rd = radius.powf(d);
                let mut sum = 0.0;
                self.measure.for_each_atom_in(radius, f64::INFINITY, |a| {
                    sum += a.mass * (a.location.powf(d) - rd);
                });
                sum * omega / d
            }
            KernelFamily::Exponential { rate, amplitude } => {
                amplitude * omega * upper_incomplete_gamma_int(self.dim, rate * radius) / rate.powf(d)
            }
            KernelFamily::Table { samples } => {
                let end = samples.last().unwrap().0;
                if radius >= end {
                    0.0
                } else {
                    let breaks: Vec<f64> = samples.iter().map(|s| s.0).collect();
                    let q = integrate_piecewise(
                        |s| self.j(s) * s.powf(d - 1.0),
                        radius,
                        end,
                        &breaks,
                        &QuadOptions::default(),
                    );
                    omega * q.value
                }
            }
            KernelFamily::Combination(parts) => {
                let mut sum = 0.0;
                for (w, k) in parts.iter().filter(|(w, _)| *w > 0.0) {
                    sum += w * k.tail_volume(radius)?;
                }
                sum
            }
        };
        if !value.is_finite() {
            return Err(Error::InadmissibleKernel(format!(
                "far-field integral diverges beyond radius {radius}"
            )));
        }
        Ok(value)
    }

    /// `int_{|z| < radius} j(|z|) dz`, possibly infinite.
    pub fn core_volume(&self, radius: f64) -> f64 {
        let d = self.dim as f64;
        let omega = unit_sphere_area(self.dim);
        if self.singularity_exponent() >= d {
            return f64::INFINITY;
        }
        let mut breaks = self.measure.breakpoints_in(0.0, radius);
        breaks.retain(|&b| b > 0.0);
        let q = integrate_piecewise(|s| self.j(s) * s.powf(d - 1.0), 0.0, radius, &breaks, &QuadOptions::default());
        omega * q.value
    }

    /// Integrability check with this kernel's `beta`.
    pub fn check_levy(&self) -> LevyReport {
        self.check_levy_with(self.beta)
    }

    pub fn check_levy_with(&self, beta: f64) -> LevyReport {
        let d = self.dim as f64;
        let omega = unit_sphere_area(self.dim);
        // power of r in the radial near-origin integrand is beta + d - 2
        let p = beta + d - 2.0;
        let tail = self.tail_volume(1.0).unwrap_or(f64::INFINITY);
        let (near, method) = match &self.family {
            KernelFamily::Fractional { alpha } => {
                // integrand r^(beta - 2 - alpha); compared in this form to be exact at the threshold
                let near = if beta > alpha + 1.0 {
                    omega / (beta - alpha - 1.0)
                } else {
                    f64::INFINITY
                };
                (near, LevyMethod::Analytic)
            }
            KernelFamily::TruncatedConstant { c, r0 } => {
                let top = r0.min(1.0);
                (omega * c * top.powf(p + 1.0) / (p + 1.0), LevyMethod::Analytic)
            }
            KernelFamily::StepGeometric { a, q, b0, b_ratio } => {
                let series_ratio = b_ratio * q.powf(p + 1.0);
                if series_ratio >= 1.0 {
                    (f64::INFINITY, LevyMethod::Analytic)
                } else {
                    // sum_n b_n min(a_n, 1)^(p+1) / (p+1); atoms above 1 are finitely many
                    let mut sum = 0.0;
                    let mut n = 1i32;
                    while a * q.powi(n - 1) > 1.0 {
                        sum += b0 * b_ratio.powi(n);
                        n += 1;
                    }
                    let an = a * q.powi(n - 1);
                    let bn = b0 * b_ratio.powi(n);
                    sum += bn * an.powf(p + 1.0) / (1.0 - series_ratio);
                    (omega * sum / (p + 1.0), LevyMethod::Analytic)
                }
            }
            KernelFamily::Exponential { .. } => {
                let q = tanh_sinh(|r| r.powf(p) * self.j(r), 0.0, 1.0, &QuadOptions::default());
                (omega * q.value, LevyMethod::Analytic)
            }
            KernelFamily::Table { samples } => {
                let breaks: Vec<f64> = samples.iter().map(|s| s.0).collect();
                (
                    omega * dyadic_blowup_integral(|r| r.powf(p) * self.j(r), &breaks),
                    LevyMethod::Heuristic,
                )
            }
            KernelFamily::Combination(parts) => {
                let mut near = 0.0;
                let mut method = LevyMethod::Analytic;
                for (w, k) in parts.iter().filter(|(w, _)| *w > 0.0) {
                    let r = k.check_levy_with(beta);
                    near += w * r.near_origin_integral;
                    if r.method == LevyMethod::Heuristic {
                        method = LevyMethod::Heuristic;
                    }
                }
                (near, method)
            }
        };
        LevyReport {
            beta,
            near_origin_integral: near,
            tail_integral: tail,
            admissible: near.is_finite() && tail.is_finite(),
            method,
        }
    }

    /// Volume of the ball of radius `r` in this kernel's dimension.
    pub fn ball_volume(&self, r: f64) -> f64 {
        unit_ball_volume(self.dim) * r.powi(self.dim as i32)
    }
}

fn table_slopes(samples: &[(f64, f64)]) -> Vec<f64> {
    samples
        .windows(2)
        .map(|w| (w[1].1 / w[0].1).ln() / (w[1].0 / w[0].0).ln())
        .collect()
}

fn table_interpolate(samples: &[(f64, f64)], r: f64) -> f64 {
    let slopes = table_slopes(samples);
    let (r0, j0) = samples[0];
    if r < r0 {
        return j0 * (r / r0).powf(slopes[0]);
    }
    if r >= samples.last().unwrap().0 {
        return 0.0;
    }
    let i = samples.partition_point(|s| s.0 <= r) - 1;
    let (ri, ji) = samples[i];
    ji * (r / ri).powf(slopes[i])
}

/// `Gamma(n, x)` for a positive integer `n`.
fn upper_incomplete_gamma_int(n: usize, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..n {
        term *= x / k as f64;
        sum += term;
    }
    let factorial: f64 = (1..n).map(|k| k as f64).product();
    factorial * (-x).exp() * sum
}

/// Integral over `(0, 1]` accumulated in dyadic shells towards the origin.
/// Reported infinite when the partial sums pass the blow-up threshold or fail
/// to settle within the shell budget.
fn dyadic_blowup_integral<F: Fn(f64) -> f64>(f: F, breaks: &[f64]) -> f64 {
    let opts = QuadOptions::with_tolerances(0.0, 1e-10);
    let mut total = 0.0;
    let mut hi = 1.0f64;
    for _ in 0..1000 {
        let lo = 0.5 * hi;
        let q = gauss_kronrod(&f, lo, hi, &opts);
        let inside: Vec<f64> = breaks.iter().copied().filter(|&b| b > lo && b < hi).collect();
        let inc = if inside.is_empty() {
            q.value
        } else {
            integrate_piecewise(&f, lo, hi, &inside, &opts).value
        };
        total += inc;
        if !total.is_finite() || total > LEVY_BLOWUP_THRESHOLD {
            return f64::INFINITY;
        }
        if inc.abs() <= 1e-17 * total.abs() {
            return total;
        }
        hi = lo;
    }
    f64::INFINITY
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn eval_examples() {
        let k = Kernel::fractional(2, 0.5, 1.8).unwrap();
        assert!((k.eval_j(2.0).unwrap() - 0.176_776_695_296_636_9).abs() < 1e-15);
        let t = Kernel::truncated_constant(2, 1.0, 1.0, 2.0).unwrap();
        assert_eq!(t.eval_j(0.5).unwrap(), 1.0);
        assert_eq!(t.eval_j(1.5).unwrap(), 0.0);
        assert_eq!(t.eval_j(1.0).unwrap(), 0.0);
        assert!(t.eval_j(0.0).is_err());
        assert!(t.eval_j(-1.0).is_err());
    }

    #[test]
    fn step_geometric_profile_from_series() {
        // a_n = 2^-n, b_n = 4^n; series oracle summed directly
        let k = Kernel::step_geometric(2, 0.5, 0.5, 1.0, 4.0, 1.5).unwrap();
        let series = |r: f64| (1..60).filter(|&n| 0.5f64.powi(n) > r).map(|n| 4f64.powi(n)).sum::<f64>();
        assert_eq!(k.eval_j(0.3).unwrap(), 4.0);
        for r in [0.49, 0.26, 0.2, 0.1, 0.013, 1e-4] {
            let v = k.eval_j(r).unwrap();
            assert!((v - series(r)).abs() <= 1e-12 * series(r), "r={r}");
        }
    }

    #[test]
    fn step_geometric_constructor_checks_series() {
        assert!(Kernel::step_geometric(2, 0.5, 0.5, 1.0, 4.0, 1.5).is_ok());
        assert!(Kernel::step_geometric(2, 0.5, 0.5, 1.0, 4.0, 0.5).is_err());
        // ratio 4 * 0.5^(beta+1) = 1 at beta = 1: divergent boundary
        assert!(Kernel::step_geometric(2, 0.5, 0.5, 1.0, 4.0, 1.0).is_err());
    }

    #[test]
    fn fractional_density() {
        let k = Kernel::fractional(2, 0.5, 1.8).unwrap();
        let s: f64 = 1.7;
        assert!((k.measure().density(s) - 2.5 * s.powf(-3.5)).abs() < 1e-15);
    }

    #[test]
    fn tail_volume_examples() {
        let k = Kernel::fractional(2, 0.5, 1.8).unwrap();
        assert!((k.tail_volume(1.0).unwrap() - 4.0 * PI).abs() < 1e-12);
        let t = Kernel::truncated_constant(2, 1.0, 1.0, 2.0).unwrap();
        assert_eq!(t.tail_volume(1.0).unwrap(), 0.0);
        assert!((t.tail_volume(0.5).unwrap() - PI * 0.75).abs() < 1e-14);
        assert!(t.tail_volume(0.0).is_err());
    }

    #[test]
    fn exponential_tail_volume_matches_quadrature() {
        for dim in 1..=3 {
            let k = Kernel::exponential(dim, 1.3, 2.0).unwrap();
            let omega = unit_sphere_area(dim);
            let q = gauss_kronrod(
                |s| (-1.3 * s).exp() * s.powi(dim as i32 - 1),
                0.7,
                80.0,
                &QuadOptions::default(),
            );
            assert!((k.tail_volume(0.7).unwrap() - omega * q.value).abs() < 1e-10);
        }
    }

    #[test]
    fn step_tail_volume_matches_shells() {
        let k = Kernel::step_geometric(2, 0.5, 0.5, 1.0, 4.0, 1.5).unwrap();
        let q = integrate_piecewise(
            |s| k.reference_profile(s) * s,
            0.05,
            0.5,
            &[0.0625, 0.125, 0.25],
            &QuadOptions::default(),
        );
        assert!((k.tail_volume(0.05).unwrap() - 2.0 * PI * q.value).abs() < 1e-10);
    }

    #[test]
    fn levy_examples() {
        let a = Kernel::fractional(2, 0.5, 1.8).unwrap().check_levy();
        assert!(a.admissible);
        assert_eq!(a.method, LevyMethod::Analytic);
        let b = Kernel::fractional(2, 0.5, 1.2).unwrap().check_levy();
        assert!(!b.admissible);
        assert!(b.near_origin_integral.is_infinite());
        let c = Kernel::fractional(2, 0.5, 1.5).unwrap().check_levy();
        assert!(!c.admissible, "threshold beta = alpha + 1 diverges");
        for beta in [0.1, 1.0, 2.0] {
            assert!(Kernel::truncated_constant(2, 3.0, 0.4, beta).unwrap().check_levy().admissible);
        }
    }

    #[test]
    fn levy_step_matches_direct_sum() {
        let k = Kernel::step_geometric(2, 0.5, 0.5, 1.0, 4.0, 1.5).unwrap();
        let rep = k.check_levy();
        let direct: f64 = (1..200).map(|n| 4f64.powi(n) * 0.5f64.powi(n).powf(2.5) / 2.5).sum::<f64>() * 2.0 * PI;
        assert!((rep.near_origin_integral - direct).abs() < 1e-10 * direct);
    }

    #[test]
    fn table_kernel_heuristic_threshold() {
        // samples of r^-2.5 (d = 2): admissible iff beta > 1.5
        let samples: Vec<(f64, f64)> = [0.1, 0.3, 1.0, 2.0].iter().map(|&r: &f64| (r, r.powf(-2.5))).collect();
        let good = Kernel::table(2, samples.clone(), 1.8).unwrap().check_levy();
        assert!(good.admissible);
        assert_eq!(good.method, LevyMethod::Heuristic);
        let bad = Kernel::table(2, samples, 1.2).unwrap().check_levy();
        assert!(!bad.admissible);
    }

    #[test]
    fn table_kernel_profile_and_tail_volume() {
        let samples = vec![(0.2, 5.0), (0.5, 2.0), (1.0, 0.5)];
        let k = Kernel::table(2, samples, 2.0).unwrap();
        for r in [0.05, 0.2, 0.3, 0.5, 0.77, 0.999] {
            let a = k.eval_j(r).unwrap();
            let b = k.reference_profile(r);
            assert!((a - b).abs() <= 1e-12 * b, "r={r} {a} {b}");
        }
        assert_eq!(k.eval_j(1.0).unwrap(), 0.0);
        let tv = k.tail_volume(0.3).unwrap();
        let q = integrate_piecewise(|s| k.reference_profile(s) * s, 0.3, 1.0, &[0.5], &QuadOptions::default());
        assert!((tv - 2.0 * PI * q.value).abs() < 1e-10);
    }

    #[test]
    fn j_at_zero_examples() {
        assert!(!Kernel::truncated_constant(2, 1.0, 1.0, 2.0).unwrap().check_j_at_zero());
        assert!(Kernel::fractional(3, 0.3, 2.0).unwrap().check_j_at_zero());
        assert!(Kernel::step_geometric(2, 0.5, 0.5, 1.0, 4.0, 1.5).unwrap().check_j_at_zero());
        assert!(Kernel::exponential(2, 1.0, 2.0).unwrap().check_j_at_zero());
        assert_eq!(
            Kernel::truncated_constant(2, 2.0, 0.7, 2.0).unwrap().plateau(),
            Some((0.7, 2.0))
        );
    }

    #[test]
    fn combination_is_linear() {
        let a = Kernel::exponential(2, 1.0, 2.0).unwrap();
        let b = Kernel::truncated_constant(2, 1.0, 0.8, 2.0).unwrap();
        let c = Kernel::combine(vec![(2.0, a.clone()), (0.5, b.clone())], 2.0).unwrap();
        for r in [0.1, 0.5, 0.79, 0.8, 1.3] {
            let expect = 2.0 * a.eval_j(r).unwrap() + 0.5 * b.eval_j(r).unwrap();
            assert!((c.eval_j(r).unwrap() - expect).abs() < 1e-14);
        }
        let tv = 2.0 * a.tail_volume(0.3).unwrap() + 0.5 * b.tail_volume(0.3).unwrap();
        assert!((c.tail_volume(0.3).unwrap() - tv).abs() < 1e-12);
        assert!(c.check_j_at_zero());
    }
}
