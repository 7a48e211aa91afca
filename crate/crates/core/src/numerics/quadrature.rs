//! One-dimensional quadrature.
//!
//! Two independent engines: a double-exponential (tanh-sinh) rule, which is
//! the workhorse for integrands that are analytic inside an interval but may
//! carry algebraic singularities at its endpoints, and an adaptive
//! Gauss-Kronrod 10/21 rule for integrands with unknown interior kinks.

use std::collections::BinaryHeap;

/// Outcome of a quadrature call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Tolerances shared by both engines. The target is
/// `max(abs_tol, rel_tol * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_level: usize,
    pub max_subdivisions: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-12,
            max_level: 9,
            max_subdivisions: 4000,
        }
    }
}

impl QuadOptions {
    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

const HALF_PI: f64 = std::f64::consts::FRAC_PI_2;
// Beyond this abscissa parameter the tanh-sinh weights underflow.
const TS_T_MAX: f64 = 4.0;

/// Tanh-sinh quadrature on `[a, b]`.
///
/// The integrand is never evaluated at the endpoints themselves, so
/// integrable endpoint singularities are fine. Levels halve the step until two
/// successive estimates agree to the requested tolerance.
pub fn tanh_sinh<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: &QuadOptions) -> Quadrature {
    if a == b {
        return Quadrature {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
            converged: true,
        };
    }
    if b < a {
        let mut q = tanh_sinh(f, b, a, opts);
        q.value = -q.value;
        return q;
    }
    let half = 0.5 * (b - a);
    let mut evals = 0usize;

    // Contribution of the abscissa pair at parameter t (or the center at t = 0).
    let mut pair = |t: f64, evals: &mut usize| -> f64 {
        let u = HALF_PI * t.sinh();
        let cosh_u = u.cosh();
        let w = HALF_PI * t.cosh() / (cosh_u * cosh_u);
        if t == 0.0 {
            *evals += 1;
            return w * f(a + half);
        }
        // 1 - tanh(u) without cancellation
        let e = (-2.0 * u).exp();
        let delta = half * 2.0 * e / (1.0 + e);
        let mut acc = 0.0;
        if delta > 0.0 && a + delta > a && a + delta < b {
            acc += f(a + delta);
            *evals += 1;
        }
        let xr = b - delta;
        if delta > 0.0 && xr < b && xr > a {
            acc += f(xr);
            *evals += 1;
        }
        w * acc
    };

    let mut h = 1.0;
    let mut sum = pair(0.0, &mut evals);
    let mut k = 1;
    while (k as f64) * h <= TS_T_MAX {
        sum += pair(k as f64 * h, &mut evals);
        k += 1;
    }
    let mut estimate = half * h * sum;
    let mut error = f64::INFINITY;
    for _level in 1..=opts.max_level {
        h *= 0.5;
        let mut k = 1;
        while (k as f64) * h <= TS_T_MAX {
            sum += pair(k as f64 * h, &mut evals);
            k += 2;
        }
        let next = half * h * sum;
        error = (next - estimate).abs();
        estimate = next;
        if !estimate.is_finite() {
            break;
        }
        // Convergence is quadratic in the level, so once consecutive
        // levels agree the newer estimate is far better than `error`.
        if error <= opts.target(estimate) {
            return Quadrature {
                value: estimate,
                error,
                evaluations: evals,
                converged: true,
            };
        }
    }
    Quadrature {
        value: estimate,
        error,
        evaluations: evals,
        converged: false,
    }
}

// Gauss-Kronrod 10/21 nodes and weights on [-1, 1].
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7, 9).
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[10] * fc;
    let mut gauss = 0.0;
    for i in 0..10 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    let kron = kron * h;
    let gauss = gauss * h;
    (kron, (kron - gauss).abs())
}

#[derive(Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive Gauss-Kronrod 10/21 quadrature on `[a, b]`, bisecting
/// the panel with the largest error estimate first.
pub fn gauss_kronrod<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: &QuadOptions) -> Quadrature {
    if a == b {
        return Quadrature {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
            converged: true,
        };
    }
    if b < a {
        let mut q = gauss_kronrod(f, b, a, opts);
        q.value = -q.value;
        return q;
    }
    let (value, error) = gk21(&mut f, a, b);
    let mut evals = 21;
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    let mut splits = 0;
    while total_err > opts.target(total) && splits < opts.max_subdivisions {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // cannot split further in floating point
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk21(&mut f, worst.a, mid);
        let (v2, e2) = gk21(&mut f, mid, worst.b);
        evals += 42;
        splits += 1;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
    // re-sum to shed accumulated rounding from the running totals
    let value: f64 = heap.iter().map(|p| p.value).sum();
    let error: f64 = heap.iter().map(|p| p.error).sum();
    Quadrature {
        value,
        error,
        evaluations: evals,
        converged: error <= opts.target(value),
    }
}

/// Integrates over `[a, b]` split at the given interior breakpoints, using
/// tanh-sinh on each piece and falling back to Gauss-Kronrod on pieces where
/// tanh-sinh does not settle.
pub fn integrate_piecewise<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    opts: &QuadOptions,
) -> Quadrature {
    let mut nodes = Vec::with_capacity(breakpoints.len() + 2);
    nodes.push(a);
    for &p in breakpoints {
        if p > a && p < b {
            nodes.push(p);
        }
    }
    nodes.push(b);
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    let mut out = Quadrature {
        value: 0.0,
        error: 0.0,
        evaluations: 0,
        converged: true,
    };
    for w in nodes.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi - lo <= f64::EPSILON * hi.abs().max(lo.abs()) {
            continue;
        }
        let mut q = tanh_sinh(&mut f, lo, hi, opts);
        if !q.converged {
            let g = gauss_kronrod(&mut f, lo, hi, opts);
            if g.converged || g.error < q.error {
                q = Quadrature {
                    evaluations: q.evaluations + g.evaluations,
                    ..g
                };
            }
        }
        out.value += q.value;
        out.error += q.error;
        out.evaluations += q.evaluations;
        out.converged &= q.converged;
    }
    out
}
