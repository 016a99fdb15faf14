use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::config::ToleranceConfig;
use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::framing::{CurvatureField, FrameField};
use crate::numeric::linear_fit;
use crate::vector::VectorN;

/// `psi = scale * Y` with `|Y| = 1`, and how well `scale` follows
/// `|c| sec(omega s + phase)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphericalFactor {
    pub params: Vec<f64>,
    pub scale: Vec<f64>,
    pub directions: Vec<VectorN>,
    pub sphere_dim: usize,
    pub omega: f64,
    pub phase: f64,
    /// `max |scale cos(omega s + phase) / |c| - 1|`
    pub misfit: f64,
    /// `max ||Y| - 1|`
    pub unit_residual: f64,
    pub is_sec: bool,
}

fn sec_misfit(params: &[f64], scale: &[f64], c: f64, omega: f64, phase: f64) -> f64 {
    params
        .iter()
        .zip(scale)
        .map(|(s, r)| (r * (omega * s + phase).cos() / c - 1.0).abs())
        .fold(0.0, f64::max)
}

/// Splits `psi` into its norm and direction and fits the norm against a
/// secant profile, allowing an affine change `s -> omega s + phase` of the
/// variable. A constant norm gives `omega = 0`, reported as not a secant.
pub fn spherical_factorization(psi: &Curve, c: f64, cfg: &ToleranceConfig) -> Result<SphericalFactor> {
    if c == 0.0 || !c.is_finite() {
        return Err(Error::InvalidConfig(format!("scale constant must be nonzero, got {c}")));
    }
    let params = psi.grid(1001);
    let mut scale = Vec::with_capacity(params.len());
    let mut directions = Vec::with_capacity(params.len());
    for &s in &params {
        let p = psi.position(s)?;
        let r = p.norm();
        if r <= cfg.singular_guard {
            return Err(Error::ZeroVector { s });
        }
        directions.push(&p * (1.0 / r));
        scale.push(r);
    }
    let unit_residual = directions.iter().map(|y| (y.norm() - 1.0).abs()).fold(0.0, f64::max);
    let c = c.abs();

    // angle = +-acos(|c| / scale), negative before the minimum of the norm
    let m = (0..scale.len()).min_by(|&a, &b| scale[a].total_cmp(&scale[b])).unwrap();
    let angles: Vec<f64> = scale
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let h = (c / r).min(1.0).acos();
            if i < m {
                -h
            } else {
                h
            }
        })
        .collect();
    let (mut omega, mut phase) = linear_fit(&params, &angles);
    let mut misfit = sec_misfit(&params, &scale, c, omega, phase);

    // a few Gauss-Newton steps on the relative residual
    for _ in 0..8 {
        let (mut a11, mut a12, mut a22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (s, r) in params.iter().zip(&scale) {
            let th = omega * s + phase;
            let g = r * th.cos() / c - 1.0;
            let dphi = -r * th.sin() / c;
            let dom = dphi * s;
            a11 += dom * dom;
            a12 += dom * dphi;
            a22 += dphi * dphi;
            b1 += dom * g;
            b2 += dphi * g;
        }
        let det = a11 * a22 - a12 * a12;
        if det.abs() < 1e-300 {
            break;
        }
        let d_om = (a22 * b1 - a12 * b2) / det;
        let d_ph = (a11 * b2 - a12 * b1) / det;
        let trial = sec_misfit(&params, &scale, c, omega - d_om, phase - d_ph);
        if trial < misfit {
            omega -= d_om;
            phase -= d_ph;
            misfit = trial;
        } else {
            break;
        }
    }
    let span = params[params.len() - 1] - params[0];
    let is_sec = (omega * span).abs() > 1e-6 && misfit <= 10.0 * cfg.residual_tol;
    Ok(SphericalFactor {
        params,
        scale,
        directions,
        sphere_dim: psi.dim() - 1,
        omega,
        phase,
        misfit,
        unit_residual,
        is_sec,
    })
}

/// Least-squares sphere through a point set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereFit {
    pub center: VectorN,
    pub radius: f64,
    /// Dimension of the affine hull of the points.
    pub hull_dim: usize,
    /// The points span less than the ambient space; the fit was done inside
    /// their affine hull, which picks the hull-centered sphere.
    pub degenerate: bool,
}

/// Linear least-squares sphere fit (`2<p, c> + d = |p|^2`, `r^2 = d + |c|^2`).
/// Coplanar or otherwise flat data is fitted inside its affine hull.
pub fn fit_sphere(points: &[VectorN]) -> Result<SphereFit> {
    let n = points.first().map(|p| p.dim()).ok_or(Error::InsufficientData { needed: 3, got: 0 })?;
    let m = points.len();
    let mean = VectorN::combination(&vec![1.0 / m as f64; m], points);
    let mut cov = DMatrix::<f64>::zeros(n, n);
    for p in points {
        let d = DVector::from_column_slice((p - &mean).as_slice());
        cov += &d * d.transpose();
    }
    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let top = eig.eigenvalues[order[0]];
    if !(top > 0.0) {
        return Err(Error::FitDegeneracy("all points coincide".into()));
    }
    let k = order.iter().filter(|&&i| eig.eigenvalues[i] > 1e-12 * top).count();
    if k < 2 {
        return Err(Error::FitDegeneracy("points are collinear".into()));
    }
    if m < k + 2 {
        return Err(Error::InsufficientData { needed: k + 2, got: m });
    }
    let basis: Vec<DVector<f64>> = order[..k].iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect();
    let local: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            let d = DVector::from_column_slice((p - &mean).as_slice());
            basis.iter().map(|b| b.dot(&d)).collect()
        })
        .collect();
    let mut a = DMatrix::<f64>::zeros(m, k + 1);
    let mut rhs = DVector::<f64>::zeros(m);
    for (row, q) in local.iter().enumerate() {
        for (col, x) in q.iter().enumerate() {
            a[(row, col)] = 2.0 * x;
        }
        a[(row, k)] = 1.0;
        rhs[row] = q.iter().map(|x| x * x).sum();
    }
    let sol = a
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::FitDegeneracy(e.to_string()))?;
    let cq: Vec<f64> = (0..k).map(|i| sol[i]).collect();
    let r2 = sol[k] + cq.iter().map(|x| x * x).sum::<f64>();
    if !(r2 > 0.0) {
        return Err(Error::FitDegeneracy("negative squared radius".into()));
    }
    let mut center = mean.clone();
    for (b, x) in basis.iter().zip(&cq) {
        center.axpy(*x, &VectorN::from_vec(b.iter().copied().collect()));
    }
    Ok(SphereFit {
        center,
        radius: r2.sqrt(),
        hull_dim: k,
        degenerate: k < n,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphericalCoefficients {
    pub center: VectorN,
    /// `a_i = mean <alpha - center, xi_{i+1}>`
    pub a: Vec<f64>,
    /// `sqrt(sum a_i^2)`
    pub radius: f64,
    pub fit_radius: f64,
    /// `max |sum_i a_i k_i + 1|`
    pub relation_residual: f64,
    /// `max |<alpha - center, xi_{i+1}> - a_i|`
    pub constancy_residual: f64,
    /// `max ||alpha - center| - radius|`
    pub distance_residual: f64,
    pub degenerate: bool,
}

/// Projects `alpha - center` onto the RM normals. On a sphere these
/// projections are constant and `sum_i a_i k_i + 1 = 0`.
pub fn spherical_coefficients(
    alpha: &Curve,
    field: &FrameField,
    curvatures: &CurvatureField,
    _cfg: &ToleranceConfig,
) -> Result<SphericalCoefficients> {
    if curvatures.len() != field.len()
        || curvatures
            .params()
            .iter()
            .zip(field.frames())
            .any(|(a, f)| (a - f.s).abs() > 1e-12 * a.abs().max(1.0))
    {
        return Err(Error::GridMismatch("curvatures and frames are sampled differently".into()));
    }
    if curvatures.count() + 1 != alpha.dim() || field.dim() != alpha.dim() {
        return Err(Error::DimensionMismatch {
            left: alpha.dim(),
            right: field.dim(),
        });
    }
    let points = field.frames().iter().map(|f| alpha.position(f.s)).collect::<Result<Vec<_>>>()?;
    let fit = fit_sphere(&points)?;
    let m = curvatures.count();
    let proj: Vec<Vec<f64>> = points
        .iter()
        .zip(field.frames())
        .map(|(p, f)| {
            let d = p - &fit.center;
            f.normals().iter().map(|v| d.dot(v)).collect()
        })
        .collect();
    let a: Vec<f64> = (0..m).map(|i| proj.iter().map(|p| p[i]).sum::<f64>() / proj.len() as f64).collect();
    let radius = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let constancy_residual = proj
        .iter()
        .flat_map(|p| p.iter().zip(&a).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max);
    let relation_residual = (0..curvatures.len())
        .map(|k| (curvatures.at(k).iter().zip(&a).map(|(x, y)| x * y).sum::<f64>() + 1.0).abs())
        .fold(0.0, f64::max);
    let distance_residual = points
        .iter()
        .map(|p| (p.distance(&fit.center) - radius).abs())
        .fold(0.0, f64::max);
    Ok(SphericalCoefficients {
        center: fit.center,
        a,
        radius,
        fit_radius: fit.radius,
        relation_residual,
        constancy_residual,
        distance_residual,
        degenerate: fit.degenerate,
    })
}
