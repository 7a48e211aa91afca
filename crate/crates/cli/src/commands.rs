use std::f64::consts::PI;

use rayon::prelude::*;
use serde_json::{json, Value};

use nlmc_core::curvature::{
    closed_form_small_set, curvature_profile_with, tangential_derivative_with, CurvatureProfile, PvOptions,
};
use nlmc_core::kernels::KernelSpec;
use nlmc_core::movingplanes::{
    alexandrov_probe, critical_plane_reports, CriticalPlaneReport, MeasureMethod, MovingPlaneOptions,
};
use nlmc_core::{Kernel, Shape, ShapeSpec};

use crate::args::{
    CounterexampleArgs, KernelCheckArgs, MovingPlanesArgs, OutputArgs, ProfileArgs, PvArgs,
};
use crate::output::{num, Cell, Report};
use crate::{CliError, Outcome};

const COORDS: [&str; 3] = ["x", "y", "z"];

/// Inline JSON when the argument starts with `{`, otherwise a file path.
pub fn read_spec(arg: &str) -> Result<String, CliError> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg).map_err(|e| CliError::Input(format!("cannot read `{arg}`: {e}")))
}

pub fn load_shape(arg: &str) -> Result<(Shape, Value), CliError> {
    let spec = ShapeSpec::from_json(&read_spec(arg)?)?;
    let shape = spec.build()?;
    Ok((shape, serde_json::to_value(&spec).expect("spec serializes")))
}

pub fn load_kernel(arg: &str) -> Result<(Kernel, Value), CliError> {
    let spec = KernelSpec::from_json(&read_spec(arg)?)?;
    let kernel = spec.build()?;
    Ok((kernel, serde_json::to_value(&spec).expect("spec serializes")))
}

fn pv_options(a: &PvArgs) -> Result<PvOptions, CliError> {
    if a.n == 0 {
        return Err(CliError::Input("--n must be at least 1".into()));
    }
    if !(a.tol > 0.0 && a.tol.is_finite()) {
        return Err(CliError::Input(format!("--tol must be positive, got {}", a.tol)));
    }
    let opts = PvOptions {
        max_levels: a.max_levels,
        ..PvOptions::with_tol(a.tol)
    };
    if opts.max_levels < opts.min_levels {
        return Err(CliError::Input(format!("--max-levels must be at least {}", opts.min_levels)));
    }
    Ok(opts)
}

fn emit(report: &Report, out: &OutputArgs, converged: bool) -> Result<Outcome, CliError> {
    Ok(Outcome {
        text: report.render(out.format),
        out: out.out.clone(),
        converged,
        warning: (!converged).then(|| "not every limit converged".to_string()),
    })
}

fn point_columns(dim: usize) -> Vec<String> {
    let mut cols = vec!["idx".to_string()];
    if dim == 2 {
        cols.push("param".into());
    } else {
        cols.extend((1..dim).map(|i| format!("param{i}")));
    }
    cols.extend(COORDS[..dim].iter().map(|c| c.to_string()));
    cols
}

fn point_cells(idx: usize, param: &[f64], position: &[f64]) -> Vec<Cell> {
    let mut row = vec![Cell::Int(idx)];
    row.extend(param.iter().map(|&p| Cell::Num(p)));
    row.extend(position.iter().map(|&x| Cell::Num(x)));
    row
}

fn header(report: &mut Report, command: &str, shape: &Value, kernel: Option<&Value>) {
    report.meta("command", command);
    report.meta("shape", shape.clone());
    if let Some(k) = kernel {
        report.meta("kernel", k.clone());
    }
}

pub fn kernel_check(a: &KernelCheckArgs) -> Result<Outcome, CliError> {
    let (kernel, spec) = load_kernel(&a.kernel)?;
    let kernel = match a.beta {
        Some(b) => kernel.with_beta(b)?,
        None => kernel,
    };
    let levy = kernel.check_levy();
    let nondegenerate = kernel.check_j_at_zero();
    let method = match levy.method {
        nlmc_core::kernels::LevyMethod::Analytic => "analytic",
        nlmc_core::kernels::LevyMethod::Heuristic => "heuristic",
    };
    let text = match a.format {
        None => {
            let mut s = format!(
                "kernel: {}\ndim: {}\nbeta: {}\nadmissible: {}\nnear_origin_integral: {:e}\ntail_integral: {:e}\nmethod: {method}\n",
                kernel.name(),
                kernel.dim(),
                levy.beta,
                levy.admissible,
                levy.near_origin_integral,
                levy.tail_integral,
            );
            if nondegenerate {
                s.push_str("nondegenerate: true\n");
            } else {
                let plateau = kernel.plateau().map_or(String::new(), |(r, c)| format!(", j = {c} on (0, {r})"));
                s.push_str(&format!(
                    "nondegenerate: false (constant near the origin{plateau}; small sets of constant curvature need not be balls)\n"
                ));
            }
            s
        }
        Some(format) => {
            let mut r = Report::default();
            r.meta("command", "kernel-check");
            r.meta("kernel", spec);
            r.columns = ["kernel", "dim", "beta", "admissible", "near_origin_integral", "tail_integral", "method", "nondegenerate"]
                .map(String::from)
                .to_vec();
            r.rows = vec![vec![
                Cell::Text(kernel.name().into()),
                Cell::Int(kernel.dim()),
                Cell::Num(levy.beta),
                Cell::Bool(levy.admissible),
                Cell::Num(levy.near_origin_integral),
                Cell::Num(levy.tail_integral),
                Cell::Text(method.into()),
                Cell::Bool(nondegenerate),
            ]];
            r.summary = json!({ "admissible": levy.admissible, "nondegenerate": nondegenerate });
            r.render(format)
        }
    };
    Ok(Outcome {
        text,
        out: a.out.clone(),
        converged: levy.admissible,
        warning: (!levy.admissible).then(|| format!("kernel is not admissible at beta = {}", levy.beta)),
    })
}

fn profile_summary(profile: &CurvatureProfile) -> Value {
    let r = &profile.report;
    let verdict = if !r.all_converged {
        "not_converged"
    } else if r.constant {
        "constant"
    } else {
        "not_constant"
    };
    json!({
        "mean": num(r.mean),
        "min": num(r.min),
        "max": num(r.max),
        "spread": num(r.spread),
        "verdict": verdict,
    })
}

pub fn profile(a: &ProfileArgs) -> Result<Outcome, CliError> {
    let (shape, shape_v) = load_shape(&a.shape)?;
    let (kernel, kernel_v) = load_kernel(&a.kernel)?;
    let opts = pv_options(&a.pv)?;
    let profile = curvature_profile_with(&shape, &kernel, a.pv.n, &opts)?;

    let mut r = Report::default();
    header(&mut r, "profile", &shape_v, Some(&kernel_v));
    r.meta("n", a.pv.n);
    r.meta("tol", num(a.pv.tol));
    r.meta("seed", a.seed);
    r.columns = point_columns(shape.dim());
    r.columns.extend(["H", "err", "converged"].map(String::from));
    for row in profile.rows() {
        let mut cells = point_cells(row.index, &row.param, &row.position);
        cells.extend([Cell::Num(row.value), Cell::Num(row.error_estimate), Cell::Bool(row.converged)]);
        r.rows.push(cells);
    }
    r.summary = profile_summary(&profile);
    emit(&r, &a.output, profile.report.all_converged)
}

pub fn tangent_deriv(a: &ProfileArgs) -> Result<Outcome, CliError> {
    let (shape, shape_v) = load_shape(&a.shape)?;
    let (kernel, kernel_v) = load_kernel(&a.kernel)?;
    let opts = pv_options(&a.pv)?;
    let points = shape.boundary_sample(a.pv.n)?;
    let results = points
        .par_iter()
        .map(|p| tangential_derivative_with(&shape, &kernel, p, &p.tangents[0], &opts))
        .collect::<Result<Vec<_>, _>>()?;

    let mut r = Report::default();
    header(&mut r, "tangent-deriv", &shape_v, Some(&kernel_v));
    r.meta("n", a.pv.n);
    r.meta("tol", num(a.pv.tol));
    r.meta("seed", a.seed);
    r.columns = point_columns(shape.dim());
    r.columns.extend(COORDS[..shape.dim()].iter().map(|c| format!("t{c}")));
    r.columns.extend(["dH", "err", "converged"].map(String::from));
    let mut max_abs = 0.0f64;
    let mut max_err = 0.0f64;
    for (i, (p, res)) in points.iter().zip(&results).enumerate() {
        let mut cells = point_cells(i, &p.param, &p.position);
        cells.extend(p.tangents[0].iter().map(|&t| Cell::Num(t)));
        cells.extend([Cell::Num(res.value), Cell::Num(res.error_estimate), Cell::Bool(res.converged)]);
        r.rows.push(cells);
        max_abs = max_abs.max(res.value.abs());
        max_err = max_err.max(res.error_estimate);
    }
    let converged = results.iter().all(|res| res.converged);
    r.summary = json!({
        "max_abs": num(max_abs),
        "max_err": num(max_err),
        "all_converged": converged,
    });
    emit(&r, &a.output, converged)
}

/// Unit directions: evenly spaced angles in 2D, a Fibonacci lattice in 3D.
pub fn directions(dim: usize, n: usize) -> Vec<Vec<f64>> {
    match dim {
        2 => (0..n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        _ => {
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..n)
                .map(|i| {
                    let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
                    let rho = (1.0 - z * z).sqrt();
                    let phi = golden * i as f64;
                    vec![rho * phi.cos(), rho * phi.sin(), z]
                })
                .collect()
        }
    }
}

fn plane_rows(r: &mut Report, dim: usize, planes: &[CriticalPlaneReport]) {
    r.columns = vec!["idx".to_string()];
    r.columns.extend(COORDS[..dim].iter().map(|c| format!("e{c}")));
    r.columns.extend(
        ["s_max", "lambda_star", "classification", "sym_diff", "stderr", "method", "deficit"].map(String::from),
    );
    for (i, p) in planes.iter().enumerate() {
        let mut cells = vec![Cell::Int(i)];
        cells.extend(p.direction.iter().map(|&c| Cell::Num(c)));
        let method = match p.sym_diff.method {
            MeasureMethod::ExactPolygon => "exact_polygon",
            MeasureMethod::MonteCarlo => "monte_carlo",
        };
        cells.extend([
            Cell::Num(p.s_max),
            Cell::Num(p.lambda_star),
            Cell::Text(p.classification.label().into()),
            Cell::Num(p.sym_diff.value),
            Cell::Num(p.sym_diff.stderr),
            Cell::Text(method.into()),
            p.deficit.map_or(Cell::Empty, Cell::Num),
        ]);
        r.rows.push(cells);
    }
}

pub fn moving_planes(a: &MovingPlanesArgs) -> Result<Outcome, CliError> {
    let (shape, shape_v) = load_shape(&a.shape)?;
    let kernel = a.kernel.as_deref().map(load_kernel).transpose()?;
    if a.dirs == 0 {
        return Err(CliError::Input("--dirs must be at least 1".into()));
    }
    if a.samples == 0 {
        return Err(CliError::Input("--samples must be at least 1".into()));
    }
    if let Some(t) = a.tol_lambda {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Input(format!("--tol-lambda must be positive, got {t}")));
        }
    }
    let opts = MovingPlaneOptions {
        tol_lambda: a.tol_lambda,
        mc_samples: a.samples,
        seed: a.seed,
        ..MovingPlaneOptions::default()
    };
    let dirs = directions(shape.dim(), a.dirs);
    let volume = shape.volume();

    let mut r = Report::default();
    header(&mut r, "moving-planes", &shape_v, kernel.as_ref().map(|k| &k.1));
    r.meta("dirs", a.dirs);
    r.meta("samples", a.samples);
    r.meta("seed", a.seed);

    let (planes, extra, converged) = match &kernel {
        Some((k, _)) => {
            if !(a.tol > 0.0 && a.tol.is_finite()) {
                return Err(CliError::Input(format!("--tol must be positive, got {}", a.tol)));
            }
            r.meta("n", a.n);
            r.meta("tol", num(a.tol));
            let probe = alexandrov_probe(&shape, k, &dirs, a.tol, a.n, &opts)?;
            let c = &probe.curvature;
            let extra = json!({
                "verdict": probe.verdict,
                "nondegenerate": probe.nondegenerate,
                "caveat": probe.caveat,
                "curvature": { "mean": num(c.mean), "min": num(c.min), "max": num(c.max), "spread": num(c.spread) },
            });
            (probe.planes, extra, c.all_converged)
        }
        None => (critical_plane_reports(&shape, &dirs, None, &opts)?, json!({}), true),
    };
    plane_rows(&mut r, shape.dim(), &planes);
    let max_sd = planes.iter().map(|p| p.sym_diff.value).fold(0.0, f64::max);
    let mut summary = json!({
        "symmetric": planes.iter().all(|p| p.sym_diff.is_negligible(volume)),
        "max_sym_diff": num(max_sd),
    });
    if let (Value::Object(s), Value::Object(e)) = (&mut summary, extra) {
        s.extend(e);
    }
    r.summary = summary;
    emit(&r, &a.output, converged)
}

pub fn counterexample(a: &CounterexampleArgs) -> Result<Outcome, CliError> {
    let (shape, shape_v) = load_shape(&a.shape)?;
    let (kernel, kernel_v) = load_kernel(&a.kernel)?;
    let opts = pv_options(&a.pv)?;
    let closed = closed_form_small_set(&shape, &kernel)?;
    let profile = curvature_profile_with(&shape, &kernel, a.pv.n, &opts)?;

    let mut r = Report::default();
    header(&mut r, "counterexample", &shape_v, Some(&kernel_v));
    r.meta("n", a.pv.n);
    r.meta("tol", num(a.pv.tol));
    r.meta("seed", a.seed);
    r.columns = point_columns(shape.dim());
    r.columns.extend(["H", "closed_form", "rel_diff", "err", "converged"].map(String::from));
    for row in profile.rows() {
        let mut cells = point_cells(row.index, &row.param, &row.position);
        cells.extend([
            Cell::Num(row.value),
            Cell::Num(closed),
            Cell::Num((row.value - closed).abs() / closed.abs()),
            Cell::Num(row.error_estimate),
            Cell::Bool(row.converged),
        ]);
        r.rows.push(cells);
    }
    let rep = &profile.report;
    let rel = (rep.mean - closed).abs() / closed.abs();
    let agrees = (rep.mean - closed).abs() <= a.pv.tol * closed.abs() + 2.0 * rep.max_error_estimate;
    r.summary = json!({
        "closed_form": num(closed),
        "mean": num(rep.mean),
        "rel_diff": num(rel),
        "spread": num(rep.spread),
        "verdict": if !rep.all_converged { "not_converged" } else if agrees { "agrees" } else { "differs" },
    });
    emit(&r, &a.output, rep.all_converged)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planar_directions_are_unit_and_evenly_spaced() {
        let d = directions(2, 8);
        assert_eq!(d.len(), 8);
        for (i, e) in d.iter().enumerate() {
            assert!((e[0].hypot(e[1]) - 1.0).abs() < 1e-15);
            let t = e[1].atan2(e[0]).rem_euclid(2.0 * PI);
            assert!((t - 2.0 * PI * i as f64 / 8.0).abs() < 1e-12);
        }
    }

    #[test]
    fn spatial_directions_cover_the_sphere() {
        let d = directions(3, 64);
        let mean: Vec<f64> = (0..3).map(|k| d.iter().map(|e| e[k]).sum::<f64>() / 64.0).collect();
        assert!(d.iter().all(|e| (e.iter().map(|c| c * c).sum::<f64>() - 1.0).abs() < 1e-12));
        assert!(mean.iter().all(|m| m.abs() < 0.05), "{mean:?}");
    }

    #[test]
    fn inline_and_file_specs() {
        assert_eq!(read_spec(" {\"a\":1}").unwrap(), " {\"a\":1}");
        assert!(matches!(read_spec("/no/such/file.json"), Err(CliError::Input(_))));
        let dir = std::env::temp_dir().join(format!("nlmc-spec-{}", std::process::id()));
        std::fs::write(&dir, r#"{"type":"ball","params":{"radius":1}}"#).unwrap();
        let (shape, _) = load_shape(dir.to_str().unwrap()).unwrap();
        assert_eq!(shape.dim(), 2);
        std::fs::remove_file(dir).unwrap();
    }
}
