use crate::config::ToleranceConfig;
use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::numeric::{cumulative_trapezoid, determinant};
use crate::vector::VectorN;

use super::{check_grid, complete_orientation, CurvatureField, Frame, FrameField, FrenetPair};

fn cross3(a: &VectorN, b: &VectorN) -> VectorN {
    VectorN::from_vec(vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])
}

/// Gram determinant of the normalized vectors; 0 if any vector is below `guard`.
fn normalized_gram(vectors: &[VectorN], guard: f64) -> f64 {
    let mut units = Vec::with_capacity(vectors.len());
    for v in vectors {
        let n = v.norm();
        if n <= guard {
            return 0.0;
        }
        units.push(v * (1.0 / n));
    }
    if units.len() == 1 {
        return 1.0;
    }
    let rows: Vec<VectorN> = units
        .iter()
        .map(|a| VectorN::from_vec(units.iter().map(|b| a.dot(b)).collect::<Vec<_>>()))
        .collect();
    determinant(&rows)
}

/// Frenet frame at `s` for curves in R^2, R^3 and R^4.
///
/// Gram-Schmidt on `(a', a'', ...)` gives the first `n - 1` vectors; the last
/// one completes a positively oriented basis.
pub fn frenet_frame(curve: &Curve, s: f64, cfg: &ToleranceConfig) -> Result<Frame> {
    let n = curve.dim();
    if !(2..=4).contains(&n) {
        return Err(Error::UnsupportedDimension {
            expected: "2..=4".into(),
            got: n,
        });
    }
    let derivs = (1..n)
        .map(|k| curve.derivative_with_edges(s, k, cfg))
        .collect::<Result<Vec<_>>>()?;
    let gram = normalized_gram(&derivs, cfg.singular_guard);
    if gram <= cfg.singular_guard {
        return Err(Error::FrameDegeneracy { s, gram });
    }
    let mut vectors: Vec<VectorN> = Vec::with_capacity(n);
    for d in &derivs {
        let mut e = d.clone();
        for _ in 0..2 {
            for v in &vectors {
                let p = e.dot(v);
                e.axpy(-p, v);
            }
        }
        vectors.push(e.normalized().ok_or(Error::FrameDegeneracy { s, gram })?);
    }
    vectors.push(complete_orientation(&vectors));
    Frame::new(s, vectors)
}

/// Curvature and torsion at `s` for a curve in R^3 (any parameterization).
pub fn frenet_curvatures(curve: &Curve, s: f64, cfg: &ToleranceConfig) -> Result<FrenetPair> {
    if curve.dim() != 3 {
        return Err(Error::UnsupportedDimension {
            expected: "3".into(),
            got: curve.dim(),
        });
    }
    let d1 = curve.derivative_with_edges(s, 1, cfg)?;
    let d2 = curve.derivative_with_edges(s, 2, cfg)?;
    let d3 = curve.derivative_with_edges(s, 3, cfg)?;
    let speed = d1.norm();
    if speed <= cfg.singular_guard {
        return Err(Error::SingularCurve { s });
    }
    let c = cross3(&d1, &d2);
    let cn = c.norm();
    let kappa = cn / speed.powi(3);
    if kappa <= cfg.singular_guard {
        let gram = normalized_gram(&[d1, d2], cfg.singular_guard);
        return Err(Error::FrameDegeneracy { s, gram });
    }
    let tau = c.dot(&d3) / (cn * cn);
    Ok(FrenetPair { kappa, tau })
}

fn arclength_on(curve: &Curve, grid: &[f64], cfg: &ToleranceConfig) -> Result<Vec<f64>> {
    let speeds = grid
        .iter()
        .map(|&s| curve.speed(s, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(cumulative_trapezoid(grid, &speeds))
}

/// Bishop curvatures from Frenet data, relative to the Frenet frame at
/// `grid[0]`: `theta = integral of tau ds`, `k1 = kappa cos(theta)`,
/// `k2 = kappa sin(theta)`. Also records `kappa`, `tau` and `theta`.
pub fn bishop_curvatures(curve: &Curve, grid: &[f64], cfg: &ToleranceConfig) -> Result<CurvatureField> {
    check_grid(grid, 2)?;
    let pairs = grid
        .iter()
        .map(|&s| frenet_curvatures(curve, s, cfg))
        .collect::<Result<Vec<_>>>()?;
    let arclength = arclength_on(curve, grid, cfg)?;
    let taus: Vec<f64> = pairs.iter().map(|p| p.tau).collect();
    let theta = cumulative_trapezoid(&arclength, &taus);
    let values = pairs
        .iter()
        .zip(&theta)
        .map(|(p, th)| vec![p.kappa * th.cos(), p.kappa * th.sin()])
        .collect();
    let mut field = CurvatureField::new(grid.to_vec(), values)?;
    field.frenet = Some(pairs);
    field.theta = Some(theta);
    Ok(field)
}

/// Reorders the Frenet frame as `xi_1 = N, xi_2 = B, xi_3 = T`, which is a
/// rotation-minimizing frame along the integral curve of `N`, with
/// `k1 = tau` and `k2 = -kappa`.
pub fn frenet_as_rmf(curve: &Curve, grid: &[f64], cfg: &ToleranceConfig) -> Result<(FrameField, CurvatureField)> {
    if curve.dim() != 3 {
        return Err(Error::UnsupportedDimension {
            expected: "3".into(),
            got: curve.dim(),
        });
    }
    check_grid(grid, 2)?;
    let mut frames = Vec::with_capacity(grid.len());
    let mut pairs = Vec::with_capacity(grid.len());
    for &s in grid {
        let pair = frenet_curvatures(curve, s, cfg)?;
        let f = frenet_frame(curve, s, cfg)?.into_vectors();
        frames.push(Frame::new(s, vec![f[1].clone(), f[2].clone(), f[0].clone()])?);
        pairs.push(pair);
    }
    // integral curve of N with respect to arclength of the original curve
    let speeds = grid
        .iter()
        .map(|&s| curve.speed(s, cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut points = Vec::with_capacity(grid.len());
    let mut acc = VectorN::zeros(3);
    points.push(acc.clone());
    for i in 1..grid.len() {
        let h = grid[i] - grid[i - 1];
        acc.axpy(0.5 * h * speeds[i - 1], frames[i - 1].tangent());
        acc.axpy(0.5 * h * speeds[i], frames[i].tangent());
        points.push(acc.clone());
    }
    let base = Curve::sampled(grid.to_vec(), points)?;
    let arclength = cumulative_trapezoid(grid, &speeds);
    let taus: Vec<f64> = pairs.iter().map(|p| p.tau).collect();
    let theta = cumulative_trapezoid(&arclength, &taus);
    let mut curv = CurvatureField::new(
        grid.to_vec(),
        pairs.iter().map(|p| vec![p.tau, -p.kappa]).collect(),
    )?;
    curv.frenet = Some(pairs);
    curv.theta = Some(theta);
    Ok((FrameField::new(frames, base)?, curv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::circular_helix::CircularHelix;
    use crate::numeric::{derivative_along, linspace};

    #[test]
    fn helix_frenet_frame_at_zero() {
        let cfg = ToleranceConfig::default();
        let f = frenet_frame(&builtin::helix(), 0.0, &cfg).unwrap();
        let expect = [[0.0, 0.96, 0.28], [-1.0, 0.0, 0.0], [0.0, -0.28, 0.96]];
        for (v, e) in f.vectors().iter().zip(expect) {
            for k in 0..3 {
                assert!((v[k] - e[k]).abs() < 1e-14, "{v:?}");
            }
        }
    }

    #[test]
    fn planar_circle_frame() {
        let cfg = ToleranceConfig::default();
        let f = frenet_frame(&builtin::circle(1.0, 3), 0.0, &cfg).unwrap();
        let expect = [[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 1.0]];
        for (v, e) in f.vectors().iter().zip(expect) {
            for k in 0..3 {
                assert!((v[k] - e[k]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn straight_line_is_degenerate() {
        let cfg = ToleranceConfig::default();
        assert!(matches!(
            frenet_frame(&builtin::line(3), 0.5, &cfg),
            Err(Error::FrameDegeneracy { .. })
        ));
        assert!(matches!(
            frenet_curvatures(&builtin::line(3), 0.5, &cfg),
            Err(Error::FrameDegeneracy { .. })
        ));
    }

    #[test]
    fn frenet_in_r4_and_r2() {
        let cfg = ToleranceConfig::default();
        let c = Curve::analytic(4, (0.0, 2.0), |t| vec![t.cos(), t.sin(), (2.0 * t).cos(), (2.0 * t).sin()]).unwrap();
        let f = frenet_frame(&c, 1.0, &cfg).unwrap();
        assert!(f.orthonormality_error() < 1e-9);
        assert!((f.determinant() - 1.0).abs() < 1e-9);
        let c2 = builtin::circle(1.0, 2);
        let f2 = frenet_frame(&c2, 0.0, &cfg).unwrap();
        assert!((f2.vectors()[1][0] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn helix_curvatures_exact() {
        let cfg = ToleranceConfig::default();
        let p = frenet_curvatures(&builtin::helix(), 10.0, &cfg).unwrap();
        assert!((p.kappa - 24.0 / 625.0).abs() < 1e-15);
        assert!((p.tau - 7.0 / 625.0).abs() < 1e-15);
    }

    #[test]
    fn frenet_as_rmf_helix_and_circle() {
        let cfg = ToleranceConfig::default();
        let grid = linspace(0.0, 20.0, 2001);
        let (field, curv) = frenet_as_rmf(&builtin::helix(), &grid, &cfg).unwrap();
        for i in 0..curv.len() {
            assert!((curv.at(i)[0] - 7.0 / 625.0).abs() < 1e-15);
            assert!((curv.at(i)[1] + 24.0 / 625.0).abs() < 1e-15);
        }
        // frame system: xi_1' = k1 xi_2 + k2 xi_3
        let xi1 = field.vector_series(0);
        let d = derivative_along(&grid, &xi1, 1);
        for i in 0..grid.len() {
            let f = &field.frames()[i];
            let k = curv.at(i);
            let rhs = &(&f.vectors()[1] * k[0]) + &(&f.vectors()[2] * k[1]);
            assert!((&d[i] - &rhs).norm() < 1e-5);
        }
        let (_, circ) = frenet_as_rmf(&builtin::circle(1.0, 3), &linspace(0.0, 6.0, 61), &cfg).unwrap();
        assert!(circ.at(5)[0].abs() < 1e-14 && (circ.at(5)[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn bishop_curvatures_of_helix() {
        let cfg = ToleranceConfig::default();
        let h = CircularHelix::default();
        let grid = linspace(0.0, 100.0, 1001);
        let field = bishop_curvatures(&builtin::helix(), &grid, &cfg).unwrap();
        for (i, &s) in grid.iter().enumerate() {
            let (k1, k2) = h.bishop_curvatures(s);
            assert!((field.at(i)[0] - k1).abs() < 1e-14 && (field.at(i)[1] - k2).abs() < 1e-14);
        }
    }
}
