use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use rmf_core::batch::{classify_batch, Strategy};
use rmf_core::classify::{classify_curve, ClassificationReport, Verdict};
use rmf_core::framing::{
    bishop_curvatures, frenet_as_rmf, frenet_frame, initial_frame, per_parameter, rm_curvatures_from_curve,
    rmf_double_reflection, rmf_ode, Frame,
};
use rmf_core::io::{curvature_csv, curve_csv, fmt_f64, frames_csv, frames_json, read_curve_csv, to_json};
use rmf_core::numeric::linspace;
use rmf_core::rectifying::{
    construct_type_curve, derive_free_coefficient, helix_axis, spherical_factorization, verify_derivative_rectifying,
    AxisReport, Constancy, DerivativeReport, RectifyingSpec,
};
use rmf_core::{builtin, CurvatureField, Curve, Error, FrameField, Result, ToleranceConfig};

use crate::args::{Cli, Format, Method};
use crate::svg::{curve_svg, projection_axes};
use crate::Sink;

const DEFAULT_SAMPLES: usize = 1001;

pub(crate) fn parse_range(raw: &str) -> Result<(f64, f64)> {
    let bad = || Error::Usage(format!("--range expects A:B, got '{raw}'"));
    let (a, b) = raw.split_once(':').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::Usage(format!("--range needs finite A < B, got {a}:{b}")));
    }
    Ok((a, b))
}

fn format_for(cli: &Cli, allowed: &[Format]) -> Result<Format> {
    match cli.format {
        None => Ok(allowed[0]),
        Some(f) if allowed.contains(&f) => Ok(f),
        Some(f) => Err(Error::Usage(format!(
            "format '{}' is not available for this command (use {})",
            f.name(),
            allowed.iter().map(|f| f.name()).collect::<Vec<_>>().join(" or ")
        ))),
    }
}

fn load_builtin(name: &str, cli: &Cli) -> Result<Curve> {
    let c = builtin::by_name(name, cli.dim)?;
    Ok(if cli.fd { c.without_derivatives() } else { c })
}

/// The single curve named by `--curve` or `--input`, with a label for reports.
pub(crate) fn load_curve(cli: &Cli) -> Result<(Curve, String)> {
    match (&cli.curve, cli.input.as_slice()) {
        (Some(name), []) => Ok((load_builtin(name, cli)?, name.clone())),
        (None, [path]) => Ok((read_curve_csv(path)?, path.display().to_string())),
        (None, []) => Err(Error::Usage("give a curve with --curve NAME or --input PATH".into())),
        _ => Err(Error::Usage("this command takes exactly one curve".into())),
    }
}

/// Evaluation grid: the samples of a sampled curve inside `--range`, or
/// `--samples` points over `--range` (default: the domain) otherwise.
pub(crate) fn grid_for(curve: &Curve, cli: &Cli) -> Result<Vec<f64>> {
    let range = cli.range.as_deref().map(parse_range).transpose()?;
    let grid = match curve.sample_parameters() {
        Some(params) => {
            let (a, b) = range.unwrap_or(curve.domain());
            params.iter().copied().filter(|s| *s >= a && *s <= b).collect()
        }
        None => {
            let (a, b) = range.unwrap_or(curve.domain());
            let (lo, hi) = curve.domain();
            let slack = 1e-12 * (hi - lo).max(1.0);
            if a < lo - slack || b > hi + slack {
                return Err(Error::Usage(format!("range {a}:{b} leaves the curve's domain [{lo}, {hi}]")));
            }
            linspace(a, b, cli.samples.unwrap_or(DEFAULT_SAMPLES))
        }
    };
    if grid.len() < 4 {
        return Err(Error::Usage(format!("need at least 4 samples, got {}", grid.len())));
    }
    Ok(grid)
}

/// Start of an RM frame: the Frenet frame in R^3 when it exists, so the
/// normals agree with the Bishop frame of the classical setting; otherwise
/// the deterministic frame built from the tangent.
pub(crate) fn rmf_start(curve: &Curve, s0: f64, cfg: &ToleranceConfig) -> Result<Frame> {
    if curve.dim() == 3 {
        if let Ok(f) = frenet_frame(curve, s0, cfg) {
            return Ok(f);
        }
    }
    initial_frame(curve, s0, cfg)
}

/// RM frame field and its curvatures by double reflection, or by
/// integrating the frame system with the curvatures of that field.
pub(crate) fn rmf_field(
    curve: &Curve,
    grid: &[f64],
    method: Method,
    cfg: &ToleranceConfig,
) -> Result<(FrameField, CurvatureField)> {
    let f0 = rmf_start(curve, grid[0], cfg)?;
    let dr = rmf_double_reflection(curve, grid, &f0, cfg)?;
    let k = rm_curvatures_from_curve(&dr, cfg)?;
    if method != Method::RmfOde {
        return Ok((dr, k));
    }
    let ode = rmf_ode(&per_parameter(&k, curve, cfg)?, &f0, cfg)?;
    let field = FrameField::new(ode.frames().to_vec(), curve.clone())?;
    let k = rm_curvatures_from_curve(&field, cfg)?;
    Ok((field, k))
}

pub(crate) fn frame(cli: &Cli, cfg: &ToleranceConfig, out: &mut Sink) -> Result<()> {
    let format = format_for(cli, &[Format::Json, Format::Csv])?;
    let (curve, _) = load_curve(cli)?;
    let grid = grid_for(&curve, cli)?;
    let (frames, curvatures) = match cli.method {
        Method::Frenet => {
            let frames = grid.iter().map(|&s| frenet_frame(&curve, s, cfg)).collect::<Result<Vec<_>>>()?;
            (frames, None)
        }
        m => {
            let (field, k) = rmf_field(&curve, &grid, m, cfg)?;
            (field.frames().to_vec(), Some(k))
        }
    };
    let primary = match format {
        Format::Csv => frames_csv(&frames),
        _ => frames_json(&frames)?,
    };
    let companions: Vec<(&str, String)> = curvatures.iter().map(|k| ("curvature.csv", curvature_csv(k))).collect();
    out.emit(&primary, &companions)
}

fn curvatures_for(curve: &Curve, grid: &[f64], method: Method, cfg: &ToleranceConfig) -> Result<CurvatureField> {
    match method {
        Method::Frenet => bishop_curvatures(curve, grid, cfg),
        m => Ok(rmf_field(curve, grid, m, cfg)?.1),
    }
}

pub(crate) fn curvature(cli: &Cli, cfg: &ToleranceConfig, out: &mut Sink) -> Result<()> {
    format_for(cli, &[Format::Csv])?;
    let (curve, _) = load_curve(cli)?;
    let grid = grid_for(&curve, cli)?;
    let k = curvatures_for(&curve, &grid, cli.method, cfg)?;
    out.emit(&curvature_csv(&k), &[])
}

#[derive(Serialize)]
struct FreeCoefficient {
    source: &'static str,
    constancy: Constancy,
    variation: f64,
    mean: f64,
    min: f64,
    max: f64,
}

#[derive(Serialize)]
struct Secant {
    omega: f64,
    phase: f64,
    misfit: f64,
    unit_residual: f64,
    sphere_dim: usize,
    is_sec: bool,
}

#[derive(Serialize)]
struct ConstructReport {
    curve: String,
    method: &'static str,
    n: usize,
    type_index: usize,
    constants: Vec<f64>,
    free_coefficient: FreeCoefficient,
    derivative: DerivativeReport,
    verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    helix_axis: Option<AxisReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    secant: Option<Secant>,
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Frenet => "frenet",
        Method::RmfDr => "rmf-dr",
        Method::RmfOde => "rmf-ode",
    }
}

pub(crate) fn construct(cli: &Cli, cfg: &ToleranceConfig, out: &mut Sink) -> Result<()> {
    format_for(cli, &[Format::Csv])?;
    let type_index = cli
        .type_index
        .ok_or_else(|| Error::Usage("construct needs --type J".into()))?;
    let (curve, label) = load_curve(cli)?;
    let grid = grid_for(&curve, cli)?;
    let (field, k) = match cli.method {
        Method::Frenet => frenet_as_rmf(&curve, &grid, cfg)?,
        m => rmf_field(&curve, &grid, m, cfg)?,
    };
    let spec = RectifyingSpec::new(curve.dim(), type_index, cli.constants.clone())?;
    let (spec, source) = match cli.free_const {
        Some(c) => (spec.with_free_coeff(vec![c; field.len()]), "given"),
        None => (derive_free_coefficient(&k, &spec, cfg)?, "derived"),
    };
    let psi = construct_type_curve(&field, &spec)?;
    let derivative = verify_derivative_rectifying(&field, &spec, cfg)?;
    let free = spec.free_coeff.clone().unwrap_or_default();
    let (constancy, variation) = Constancy::of(&free);
    let axis = if constancy == Constancy::Constant {
        helix_axis(&field, &spec, cfg).ok()
    } else {
        None
    };
    let c_norm = spec.constants.iter().map(|c| c * c).sum::<f64>().sqrt();
    let secant = if constancy != Constancy::Constant && c_norm > 0.0 {
        spherical_factorization(&psi, c_norm, cfg).ok().map(|f| Secant {
            omega: f.omega,
            phase: f.phase,
            misfit: f.misfit,
            unit_residual: f.unit_residual,
            sphere_dim: f.sphere_dim,
            is_sec: f.is_sec,
        })
    } else {
        None
    };
    let report = ConstructReport {
        curve: label,
        method: method_name(cli.method),
        n: spec.n,
        type_index,
        constants: spec.constants.clone(),
        free_coefficient: FreeCoefficient {
            source,
            constancy,
            variation,
            mean: rmf_core::numeric::mean(&free),
            min: free.iter().copied().fold(f64::INFINITY, f64::min),
            max: free.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        },
        verdict: Verdict::from_residual(derivative.tangent_residual, cfg.residual_tol),
        derivative,
        helix_axis: axis,
        secant,
    };

    let params = field.params();
    let mut coeff = String::from("s");
    for i in 1..spec.n {
        write!(coeff, ",c{i}").unwrap();
    }
    coeff.push('\n');
    for (i, s) in params.iter().enumerate() {
        coeff.push_str(&fmt_f64(*s));
        for c in spec.coefficients_at(i)? {
            write!(coeff, ",{}", fmt_f64(c)).unwrap();
        }
        coeff.push('\n');
    }
    let primary = curve_csv(&psi, &params)?;
    out.emit(&primary, &[("coeff.csv", coeff), ("report.json", to_json(&report)?)])
}

pub(crate) fn classify(cli: &Cli, cfg: &ToleranceConfig, out: &mut Sink) -> Result<()> {
    format_for(cli, &[Format::Json])?;
    if cli.input.len() > 1 {
        let mut jobs = Vec::with_capacity(cli.input.len());
        for path in &cli.input {
            let curve = read_curve_csv(path)?;
            let grid = grid_for(&curve, cli)?;
            jobs.push((curve, grid));
        }
        let reports = classify_batch(&jobs, Strategy::default(), cfg);
        let mut all: BTreeMap<String, ClassificationReport> = BTreeMap::new();
        for (path, r) in cli.input.iter().zip(reports) {
            all.insert(path.display().to_string(), r?);
        }
        return out.emit(&to_json(&all)?, &[]);
    }
    let (curve, _) = load_curve(cli)?;
    let grid = grid_for(&curve, cli)?;
    let report = classify_curve(&curve, &grid, cfg)?;
    out.emit(&to_json(&report)?, &[])
}

pub(crate) fn export(cli: &Cli, _cfg: &ToleranceConfig, out: &mut Sink) -> Result<()> {
    let format = format_for(cli, &[Format::Svg, Format::Csv])?;
    let (curve, _) = load_curve(cli)?;
    let grid = grid_for(&curve, cli)?;
    let primary = match format {
        Format::Csv => curve_csv(&curve, &grid)?,
        _ => curve_svg(&curve, &grid, projection_axes(&cli.project, curve.dim())?)?,
    };
    out.emit(&primary, &[])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1e-6:120").unwrap(), (1e-6, 120.0));
        assert_eq!(parse_range("-1:2").unwrap(), (-1.0, 2.0));
        assert!(matches!(parse_range("2:1"), Err(Error::Usage(_))));
        assert!(matches!(parse_range("abc"), Err(Error::Usage(_))));
    }
}
