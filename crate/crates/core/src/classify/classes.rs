use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::config::ToleranceConfig;
use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::framing::{check_grid, frenet_curvatures, frenet_frame, CurvatureField, FrameField};
use crate::numeric::{cumulative_trapezoid, derivative_along_scalar, linear_fit, mean, std_dev};
use crate::rectifying::spherical_coefficients;
use crate::vector::VectorN;

use super::ReportEntry;

const CHEN_SLOPE_MIN: f64 = 1e-6;

/// A rectifying curve in R^3 has `tau / kappa` a nonconstant linear function
/// of arclength. Residual is the root-mean-square misfit of that linear fit,
/// relative to `max(1, max |tau / kappa|)`; a constant ratio is a `no`
/// regardless.
/// Params: `[slope, intercept]` against arclength from `grid[0]`.
pub fn is_rectifying_chen(curve: &Curve, grid: &[f64], cfg: &ToleranceConfig) -> Result<ReportEntry> {
    if curve.dim() != 3 {
        return Err(Error::UnsupportedDimension {
            expected: "3".into(),
            got: curve.dim(),
        });
    }
    check_grid(grid, 3)?;
    let mut ratio = Vec::with_capacity(grid.len());
    let mut speed = Vec::with_capacity(grid.len());
    for &s in grid {
        let p = frenet_curvatures(curve, s, cfg)?;
        ratio.push(p.tau / p.kappa);
        speed.push(curve.speed(s, cfg)?);
    }
    let arclength = cumulative_trapezoid(grid, &speed);
    let (slope, intercept) = linear_fit(&arclength, &ratio);
    let scale = ratio.iter().fold(1.0_f64, |m, r| m.max(r.abs()));
    let misfit = (arclength
        .iter()
        .zip(&ratio)
        .map(|(s, r)| (r - (slope * s + intercept)).powi(2))
        .sum::<f64>()
        / ratio.len() as f64)
        .sqrt()
        / scale;
    if slope.abs() <= CHEN_SLOPE_MIN {
        let residual = (1e3 * cfg.residual_tol).max(1.0);
        return Ok(ReportEntry::new(residual, vec![slope, intercept], cfg)
            .with_note(format!("tau/kappa is constant (linear fit misfit {misfit:e})")));
    }
    Ok(ReportEntry::new(misfit, vec![slope, intercept], cfg))
}

/// Position vector in the rectifying plane: residual
/// `max |<beta, N_beta>| / |beta|` (samples where `beta` vanishes are skipped).
/// Works in any dimension with `N_beta` the principal normal.
pub fn is_rectifying_position(curve: &Curve, grid: &[f64], cfg: &ToleranceConfig) -> Result<ReportEntry> {
    check_grid(grid, 1)?;
    let mut worst: f64 = 0.0;
    for &s in grid {
        let d1 = curve.derivative_with_edges(s, 1, cfg)?;
        let d2 = curve.derivative_with_edges(s, 2, cfg)?;
        let v = d1.norm();
        if v <= cfg.singular_guard {
            return Err(Error::SingularCurve { s });
        }
        let t = &d1 * (1.0 / v);
        let mut normal = d2.clone();
        normal.axpy(-d2.dot(&t), &t);
        let k = normal.norm() / (v * v);
        if k <= cfg.singular_guard {
            return Err(Error::FrameDegeneracy { s, gram: 0.0 });
        }
        let normal = &normal * (1.0 / normal.norm());
        let beta = curve.position(s)?;
        let r = beta.norm();
        if r <= cfg.singular_guard {
            continue;
        }
        worst = worst.max(beta.dot(&normal).abs() / r);
    }
    Ok(ReportEntry::new(worst, Vec::new(), cfg))
}

/// Per-sample data for the frame-product test: `dr = a1 xi_1 + a2 xi_2 + a3 xi_3`
/// and the products `<r, xi_1>`, `<r, xi_3>`.
#[derive(Debug, Clone, PartialEq)]
pub struct MyllerInputs {
    pub params: Vec<f64>,
    pub dr_components: Vec<[f64; 3]>,
    pub frame_products: Vec<(f64, f64)>,
}

/// Builds [`MyllerInputs`] for the position vector of a space curve using its
/// Frenet frame (`xi_1 = T`, `xi_2 = N`, `xi_3 = B`).
pub fn myller_inputs_from_frenet(curve: &Curve, grid: &[f64], cfg: &ToleranceConfig) -> Result<MyllerInputs> {
    check_grid(grid, 3)?;
    let mut dr_components = Vec::with_capacity(grid.len());
    let mut frame_products = Vec::with_capacity(grid.len());
    for &s in grid {
        let f = frenet_frame(curve, s, cfg)?;
        let v = f.vectors();
        let r = curve.position(s)?;
        let dr = curve.derivative_with_edges(s, 1, cfg)?;
        dr_components.push([dr.dot(&v[0]), dr.dot(&v[1]), dr.dot(&v[2])]);
        frame_products.push((r.dot(&v[0]), r.dot(&v[2])));
    }
    Ok(MyllerInputs {
        params: grid.to_vec(),
        dr_components,
        frame_products,
    })
}

/// Both identities `d/ds <r, xi_1> = a1` and `d/ds <r, xi_3> = a3` must hold.
/// Params: `[residual (i), residual (ii)]`. The zero curve passes trivially
/// and is flagged as degenerate.
pub fn is_rectifying_type_myller(inputs: &MyllerInputs, cfg: &ToleranceConfig) -> Result<ReportEntry> {
    let m = inputs.params.len();
    if inputs.dr_components.len() != m || inputs.frame_products.len() != m {
        return Err(Error::GridMismatch(format!(
            "{} parameters, {} derivative samples, {} frame products",
            m,
            inputs.dr_components.len(),
            inputs.frame_products.len()
        )));
    }
    check_grid(&inputs.params, 3)?;
    let p1: Vec<f64> = inputs.frame_products.iter().map(|p| p.0).collect();
    let p3: Vec<f64> = inputs.frame_products.iter().map(|p| p.1).collect();
    let d1 = derivative_along_scalar(&inputs.params, &p1, 1);
    let d3 = derivative_along_scalar(&inputs.params, &p3, 1);
    let r1 = d1
        .iter()
        .zip(&inputs.dr_components)
        .map(|(d, a)| (d - a[0]).abs())
        .fold(0.0, f64::max);
    let r3 = d3
        .iter()
        .zip(&inputs.dr_components)
        .map(|(d, a)| (d - a[2]).abs())
        .fold(0.0, f64::max);
    let entry = ReportEntry::new(r1.max(r3), vec![r1, r3], cfg);
    let zero = inputs.dr_components.iter().flatten().all(|x| *x == 0.0)
        && inputs.frame_products.iter().all(|p| p.0 == 0.0 && p.1 == 0.0);
    Ok(if zero { entry.degenerate("zero curve") } else { entry })
}

/// General helix test. The axis is the direction along which the unit
/// tangent varies least: the eigenvector of the smallest eigenvalue of the
/// tangent covariance. Residual is the standard deviation of `<T, U>`.
/// Params: `[U..., mean cos angle]`.
pub fn is_helix(curve: &Curve, grid: &[f64], cfg: &ToleranceConfig) -> Result<ReportEntry> {
    check_grid(grid, 2)?;
    let n = curve.dim();
    let tangents = grid
        .iter()
        .map(|&s| curve.unit_tangent(s, cfg))
        .collect::<Result<Vec<_>>>()?;
    let m = tangents.len();
    let avg = VectorN::combination(&vec![1.0 / m as f64; m], &tangents);
    let mut cov = DMatrix::<f64>::zeros(n, n);
    for t in &tangents {
        let d = DVector::from_column_slice((t - &avg).as_slice());
        cov += &d * d.transpose();
    }
    cov /= m as f64;
    let trace = cov.trace();
    if trace < 1e-20 {
        let axis = avg.normalized().ok_or(Error::ZeroVector { s: grid[0] })?;
        let mut params = axis.into_vec();
        params.push(1.0);
        return Ok(ReportEntry::new(trace.sqrt(), params, cfg).degenerate("straight line: every axis angle is constant"));
    }
    let eig = SymmetricEigen::new(cov);
    let imin = (0..n)
        .min_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]))
        .unwrap();
    let mut axis = VectorN::new(eig.eigenvectors.column(imin).iter().copied().collect())?;
    let mut cos: Vec<f64> = tangents.iter().map(|t| t.dot(&axis)).collect();
    if mean(&cos) < 0.0 {
        axis = -axis;
        cos.iter_mut().for_each(|c| *c = -*c);
    }
    let residual = std_dev(&cos);
    let mean_cos = mean(&cos);
    let mut params = axis.into_vec();
    params.push(mean_cos);
    let entry = ReportEntry::new(residual, params, cfg);
    Ok(if mean_cos.abs() < 1e-9 && residual < cfg.residual_tol {
        entry.degenerate("tangents lie in a hyperplane: axis is its normal (planar curve)")
    } else {
        entry
    })
}

/// Sphere test through [`spherical_coefficients`]: residual is the largest of
/// the curvature-relation residual and the relative spreads of the
/// projections and of the distance to the center.
/// Params: `[center..., r, a_1, ..., a_{n-1}]`.
pub fn is_spherical(
    curve: &Curve,
    field: &FrameField,
    curvatures: &CurvatureField,
    cfg: &ToleranceConfig,
) -> Result<ReportEntry> {
    let c = spherical_coefficients(curve, field, curvatures, cfg)?;
    let residual = c
        .relation_residual
        .max(c.constancy_residual / c.radius)
        .max(c.distance_residual / c.radius);
    let mut params = c.center.as_slice().to_vec();
    params.push(c.radius);
    params.extend_from_slice(&c.a);
    let entry = ReportEntry::new(residual, params, cfg);
    Ok(if c.degenerate {
        entry.degenerate("points are coplanar: sphere fitted within their affine hull (plane-centered)")
    } else {
        entry
    })
}

/// Bertrand test on Frenet data: fits `a k1 + b k2 + 1 = 0` with `k1 = tau`,
/// `k2 = -kappa`, i.e. `a tau - b kappa + 1 = 0`, by minimum-norm least
/// squares. Residual `max |a tau - b kappa + 1|`. Params: `[a, b]`.
pub fn is_bertrand(curvatures: &CurvatureField, cfg: &ToleranceConfig) -> Result<ReportEntry> {
    let frenet = curvatures
        .frenet
        .as_ref()
        .ok_or_else(|| Error::InvalidConfig("Bertrand test needs curvature and torsion samples".into()))?;
    let m = frenet.len();
    let mut x = DMatrix::<f64>::zeros(m, 2);
    for (i, p) in frenet.iter().enumerate() {
        x[(i, 0)] = p.tau;
        x[(i, 1)] = -p.kappa;
    }
    if x.iter().all(|v| v.abs() <= cfg.singular_guard) {
        return Err(Error::FitDegeneracy("curvature and torsion vanish (straight line)".into()));
    }
    // reduce to the 2x2 triangle first; a direct SVD of the tall, nearly
    // rank-one matrix loses digits in the minimal-norm solution
    let qr = x.qr();
    let rhs = qr.q().transpose() * DVector::from_element(m, -1.0);
    let svd = qr.r().svd(true, true);
    let smax = svd.singular_values.max();
    let sol = svd
        .solve(&rhs, 1e-9 * smax)
        .map_err(|e| Error::FitDegeneracy(e.to_string()))?;
    let (a, b) = (sol[0], sol[1]);
    let residual = frenet
        .iter()
        .map(|p| (a * p.tau - b * p.kappa + 1.0).abs())
        .fold(0.0, f64::max);
    Ok(ReportEntry::new(residual, vec![a, b], cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::classify::Verdict;
    use crate::framing::FrenetPair;
    use crate::numeric::linspace;

    #[test]
    fn helix_axis_and_angle() {
        let cfg = ToleranceConfig::default();
        let e = is_helix(&builtin::helix(), &linspace(0.0, 120.0, 601), &cfg).unwrap();
        assert_eq!(e.verdict, Verdict::Yes);
        assert!((e.params[2] - 1.0).abs() < 1e-12 && (e.params[3] - 0.28).abs() < 1e-12);
        assert!(!e.degenerate);
    }

    #[test]
    fn twisted_cubic_is_not_a_helix() {
        let cfg = ToleranceConfig::default();
        let e = is_helix(&builtin::twisted_cubic(), &linspace(-1.0, 1.0, 401), &cfg).unwrap();
        assert_eq!(e.verdict, Verdict::No);
        assert!(e.residual > 1e-2);
    }

    #[test]
    fn planar_curve_is_flagged() {
        let cfg = ToleranceConfig::default();
        let e = is_helix(&builtin::circle(1.0, 3), &linspace(0.0, 3.0, 301), &cfg).unwrap();
        assert!(e.degenerate && e.verdict == Verdict::Yes);
    }

    #[test]
    fn circle_through_origin_is_not_rectifying() {
        let cfg = ToleranceConfig::default();
        let e = is_rectifying_position(&builtin::circle(1.0, 3), &linspace(0.0, 6.0, 61), &cfg).unwrap();
        assert!((e.residual - 1.0).abs() < 1e-12);
        assert_eq!(e.verdict, Verdict::No);
        let line = Curve::analytic(3, (0.0, 1.0), |s| vec![s + 1.0, 2.0 * (s + 1.0), 0.0]).unwrap();
        assert!(matches!(
            is_rectifying_position(&line, &linspace(0.0, 1.0, 11), &cfg),
            Err(Error::FrameDegeneracy { .. })
        ));
    }

    #[test]
    fn rectifying_curve_in_closed_form() {
        // beta(t) = sec(t) y(t), y a unit-speed small circle on the unit sphere
        let cfg = ToleranceConfig::default();
        let beta = Curve::analytic(3, (-1.0, 1.0), |t| {
            let (rho, height) = (0.8, 0.6);
            let r = 1.0 / t.cos();
            vec![r * rho * (t / rho).cos(), r * rho * (t / rho).sin(), r * height]
        })
        .unwrap();
        let grid = linspace(-0.9, 0.9, 181);
        let e = is_rectifying_position(&beta, &grid, &cfg).unwrap();
        assert!(e.residual < 1e-5, "{e:?}");
        let chen = is_rectifying_chen(&beta, &grid, &cfg).unwrap();
        assert!(chen.params[0].abs() > 1e-3, "{chen:?}");
    }

    /// Myller inputs for `r` against the Frenet frame of the reference helix.
    fn inputs_for(r: &Curve, grid: &[f64], cfg: &ToleranceConfig) -> MyllerInputs {
        let helix = builtin::helix();
        let mut inputs = MyllerInputs {
            params: grid.to_vec(),
            dr_components: vec![],
            frame_products: vec![],
        };
        for &s in grid {
            let f = frenet_frame(&helix, s, cfg).unwrap();
            let v = f.vectors();
            let p = r.position(s).unwrap();
            let dr = r.derivative_with_edges(s, 1, cfg).unwrap();
            inputs.dr_components.push([dr.dot(&v[0]), dr.dot(&v[1]), dr.dot(&v[2])]);
            inputs.frame_products.push((p.dot(&v[0]), p.dot(&v[2])));
        }
        inputs
    }

    #[test]
    fn myller_identities() {
        let cfg = ToleranceConfig::default();
        let grid = linspace(0.0, 40.0, 4001);
        let h = crate::circular_helix::CircularHelix::default();
        let lambda = |s: f64| 1.0 + 0.1 * s;
        let mu = |s: f64| 2.0 - 0.0005 * s * s;
        let r = Curve::analytic(3, (0.0, 40.0), move |s| {
            (&(&h.tangent(s) * lambda(s)) + &(&h.binormal(s) * mu(s))).into_vec()
        })
        .unwrap();
        let e = is_rectifying_type_myller(&inputs_for(&r, &grid, &cfg), &cfg).unwrap();
        assert!(e.residual < 1e-5, "{e:?}");
        assert!(!e.degenerate);

        let drifting = Curve::analytic(3, (0.0, 40.0), move |s| {
            let base = &(&h.tangent(s) * lambda(s)) + &(&h.binormal(s) * mu(s));
            (&base + &(&h.normal(s) * (0.5 * s))).into_vec()
        })
        .unwrap();
        let bad = is_rectifying_type_myller(&inputs_for(&drifting, &grid, &cfg), &cfg).unwrap();
        assert!(bad.params[0] > 1e-2, "{bad:?}");
        assert_eq!(bad.verdict, Verdict::No);

        let zero = MyllerInputs {
            params: grid.clone(),
            dr_components: vec![[0.0; 3]; grid.len()],
            frame_products: vec![(0.0, 0.0); grid.len()],
        };
        let z = is_rectifying_type_myller(&zero, &cfg).unwrap();
        assert!(z.degenerate && z.verdict == Verdict::Yes);
        let short = MyllerInputs {
            params: grid.clone(),
            dr_components: vec![[0.0; 3]; 3],
            frame_products: vec![(0.0, 0.0); grid.len()],
        };
        assert!(matches!(is_rectifying_type_myller(&short, &cfg), Err(Error::GridMismatch(_))));
    }

    fn frenet_field(pairs: Vec<FrenetPair>) -> CurvatureField {
        let grid = linspace(0.0, 1.0, pairs.len());
        let mut c = CurvatureField::new(grid, pairs.iter().map(|p| vec![p.tau, -p.kappa]).collect()).unwrap();
        c.frenet = Some(pairs);
        c
    }

    #[test]
    fn bertrand_fits() {
        let cfg = ToleranceConfig::default();
        let helix = frenet_field(vec![FrenetPair { kappa: 24.0 / 625.0, tau: 7.0 / 625.0 }; 20]);
        let e = is_bertrand(&helix, &cfg).unwrap();
        assert_eq!(e.verdict, Verdict::Yes);
        assert!((e.params[0] + 7.0).abs() < 1e-9 && (e.params[1] - 24.0).abs() < 1e-9);
        let circle = frenet_field(vec![FrenetPair { kappa: 1.0, tau: 0.0 }; 20]);
        let e = is_bertrand(&circle, &cfg).unwrap();
        assert!(e.params[0].abs() < 1e-12 && (e.params[1] - 1.0).abs() < 1e-12);
        // exact relation 2 tau - 3 kappa + 1 = 0 with varying kappa
        let exact = frenet_field(
            (0..30)
                .map(|i| {
                    let kappa = 0.5 + 0.1 * i as f64;
                    FrenetPair { kappa, tau: (3.0 * kappa - 1.0) / 2.0 }
                })
                .collect(),
        );
        let e = is_bertrand(&exact, &cfg).unwrap();
        assert!((e.params[0] - 2.0).abs() < 1e-8 && (e.params[1] - 3.0).abs() < 1e-8);
        let generic = frenet_field(
            (0..30)
                .map(|i| {
                    let t = i as f64 / 29.0;
                    FrenetPair { kappa: 1.0 + t * t, tau: (3.0 * t).sin() }
                })
                .collect(),
        );
        assert_eq!(is_bertrand(&generic, &cfg).unwrap().verdict, Verdict::No);
    }
}
