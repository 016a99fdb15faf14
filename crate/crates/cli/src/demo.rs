//! The circular helix `(24 cos(s/25), 24 sin(s/25), 7s/25)`: its curvature
//! and torsion, its Bishop curvatures, and the type-1 / type-2
//! rectifying-type curves built on the Bishop frame with `c = 1`.

use std::path::PathBuf;

use serde::Serialize;

use rmf_core::circular_helix::CircularHelix;
use rmf_core::framing::{bishop_curvatures, frenet_curvatures, frenet_frame, rm_curvatures_from_curve, rmf_double_reflection};
use rmf_core::io::{curve_csv, fmt_f64, to_json};
use rmf_core::numeric::linspace;
use rmf_core::rectifying::{construct_type_curve, derive_free_coefficient, verify_derivative_rectifying, RectifyingSpec};
use rmf_core::{CurvatureField, Curve, Error, FrameField, Result, ToleranceConfig};

use crate::args::Cli;
use crate::commands::parse_range;
use crate::svg::{curve_svg, projection_axes};
use crate::Sink;

pub const DEFAULT_RANGE: (f64, f64) = (1e-6, 120.0);
pub const DEFAULT_SAMPLES: usize = 1001;
pub const DEFAULT_DIR: &str = "rmf-demo-helix";
/// `beta_2` divides by `k2 = kappa sin(theta)`, which vanishes at `s = 0`.
pub const BETA2_START: f64 = 1.0;

#[derive(Debug, Clone, Serialize)]
pub struct DemoSample {
    pub s: f64,
    pub theta: f64,
    pub k1: f64,
    pub k2: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BetaSummary {
    pub range: (f64, f64),
    pub rows: usize,
    /// `max |<beta', xi_1>|` over interior samples
    pub tangent_residual: f64,
    pub first_point: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DemoReport {
    pub derivatives: &'static str,
    pub kappa: f64,
    pub tau: f64,
    pub kappa_expected: f64,
    pub tau_expected: f64,
    /// max over the grid of `|kappa(s) - 24/625|`
    pub kappa_deviation: f64,
    pub tau_deviation: f64,
    pub samples: Vec<DemoSample>,
    pub beta1: BetaSummary,
    pub beta2: BetaSummary,
}

#[derive(Debug)]
pub struct DemoOutput {
    pub report: DemoReport,
    pub beta1: Curve,
    pub beta2: Curve,
    pub beta1_params: Vec<f64>,
    pub beta2_params: Vec<f64>,
}

fn beta(
    field: &FrameField,
    k: &CurvatureField,
    type_index: usize,
    cfg: &ToleranceConfig,
) -> Result<(Curve, Vec<f64>, BetaSummary)> {
    let spec = derive_free_coefficient(k, &RectifyingSpec::new(3, type_index, vec![1.0])?, cfg)?;
    let curve = construct_type_curve(field, &spec)?;
    let check = verify_derivative_rectifying(field, &spec, cfg)?;
    let params = field.params();
    let summary = BetaSummary {
        range: (params[0], *params.last().unwrap()),
        rows: params.len(),
        tangent_residual: check.tangent_residual,
        first_point: curve.position(params[0])?.into_vec(),
    };
    Ok((curve, params, summary))
}

/// Computes everything the demo prints and writes. `range` must start at
/// or after 0, where the Bishop frame is anchored to the Frenet frame.
pub fn compute(range: (f64, f64), samples: usize, fd: bool, cfg: &ToleranceConfig) -> Result<DemoOutput> {
    let (a, b) = range;
    if a < 0.0 || samples < 4 {
        return Err(Error::Usage(format!(
            "demo-helix needs a range starting at s >= 0 and at least 4 samples, got {a}:{b} with {samples}"
        )));
    }
    if b <= BETA2_START {
        return Err(Error::Usage(format!("demo-helix range must extend past s = {BETA2_START}")));
    }
    let helix = CircularHelix::default();
    let zeros = helix.k1_zeros_in(a, b);
    if !zeros.is_empty() {
        return Err(Error::Singularity { index: 1, locations: zeros });
    }
    // padded domain keeps every sample interior for finite differences
    let exact = helix.curve((-1.0, b + 1.0));
    let curve = if fd { exact.without_derivatives() } else { exact };

    let grid = linspace(a, b, samples);
    let mut kappa_dev: f64 = 0.0;
    let mut tau_dev: f64 = 0.0;
    let mut first = None;
    for &s in &grid {
        let p = frenet_curvatures(&curve, s, cfg)?;
        kappa_dev = kappa_dev.max((p.kappa - helix.curvature()).abs());
        tau_dev = tau_dev.max((p.tau - helix.torsion()).abs());
        first.get_or_insert(p);
    }
    let first = first.unwrap();

    // frames start from the Frenet frame at s = 0 so N1(0) = N, N2(0) = B
    let full: Vec<f64> = if a > 0.0 { std::iter::once(0.0).chain(grid.iter().copied()).collect() } else { grid.clone() };
    let f0 = frenet_frame(&curve, 0.0, cfg)?;
    let field = rmf_double_reflection(&curve, &full, &f0, cfg)?;
    let k = rm_curvatures_from_curve(&field, cfg)?;

    let bishop = bishop_curvatures(&curve, &full, cfg)?;
    let theta = bishop.theta.clone().unwrap_or_default();
    let offset = full.len() - grid.len();
    let shown = 5;
    let samples_out = (0..shown)
        .map(|i| {
            let idx = offset + i * (grid.len() - 1) / (shown - 1);
            DemoSample {
                s: full[idx],
                theta: theta[idx],
                k1: bishop.at(idx)[0],
                k2: bishop.at(idx)[1],
            }
        })
        .collect();

    let (beta1, beta1_params, s1) = beta(&field.restrict(a, b)?, &k.restrict(a, b)?, 1, cfg)?;
    let a2 = a.max(BETA2_START);
    let (beta2, beta2_params, s2) = beta(&field.restrict(a2, b)?, &k.restrict(a2, b)?, 2, cfg)?;

    Ok(DemoOutput {
        report: DemoReport {
            derivatives: if fd { "finite-difference" } else { "analytic" },
            kappa: first.kappa,
            tau: first.tau,
            kappa_expected: helix.curvature(),
            tau_expected: helix.torsion(),
            kappa_deviation: kappa_dev,
            tau_deviation: tau_dev,
            samples: samples_out,
            beta1: s1,
            beta2: s2,
        },
        beta1,
        beta2,
        beta1_params,
        beta2_params,
    })
}

pub(crate) fn run(cli: &Cli, cfg: &ToleranceConfig, out: &mut Sink) -> Result<()> {
    if cli.format.is_some() {
        return Err(Error::Usage("demo-helix writes CSV, SVG and JSON; --format does not apply".into()));
    }
    if cli.curve.is_some() || !cli.input.is_empty() {
        return Err(Error::Usage("demo-helix always uses the builtin helix".into()));
    }
    let axes = projection_axes(&cli.project, 3)?;
    let range = cli.range.as_deref().map(parse_range).transpose()?.unwrap_or(DEFAULT_RANGE);
    let demo = compute(range, cli.samples.unwrap_or(DEFAULT_SAMPLES), cli.fd, cfg)?;
    let r = &demo.report;

    out.print(format!("derivatives: {}", r.derivatives));
    out.print(format!(
        "kappa = {} (expected 24/625 = {}, max deviation {})",
        fmt_f64(r.kappa),
        fmt_f64(r.kappa_expected),
        fmt_f64(r.kappa_deviation)
    ));
    out.print(format!(
        "tau = {} (expected 7/625 = {}, max deviation {})",
        fmt_f64(r.tau),
        fmt_f64(r.tau_expected),
        fmt_f64(r.tau_deviation)
    ));
    out.print("s,theta,k1,k2");
    for p in &r.samples {
        out.print(format!("{},{},{},{}", fmt_f64(p.s), fmt_f64(p.theta), fmt_f64(p.k1), fmt_f64(p.k2)));
    }
    for (name, b) in [("beta1", &r.beta1), ("beta2", &r.beta2)] {
        out.print(format!(
            "{name}: s in [{}, {}], {} rows, max |<{name}', xi1>| = {}",
            fmt_f64(b.range.0),
            fmt_f64(b.range.1),
            b.rows,
            fmt_f64(b.tangent_residual)
        ));
    }

    let dir = out.out_path().map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_DIR));
    for (name, curve, params) in [
        ("beta1", &demo.beta1, &demo.beta1_params),
        ("beta2", &demo.beta2, &demo.beta2_params),
    ] {
        out.write(&dir.join(format!("{name}.csv")), &curve_csv(curve, params)?)?;
        out.write(&dir.join(format!("{name}.svg")), &curve_svg(curve, params, axes)?)?;
    }
    out.write(&dir.join("demo.json"), &to_json(r)?)
}
