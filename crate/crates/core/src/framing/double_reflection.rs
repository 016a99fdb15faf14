use crate::config::ToleranceConfig;
use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::vector::VectorN;

use super::{check_grid, Frame, FrameField};

fn reflect(v: &mut VectorN, axis: &VectorN, c: f64) {
    let p = 2.0 * axis.dot(v) / c;
    v.axpy(-p, axis);
}

/// Rotation-minimizing frame by the double reflection method.
///
/// Each step reflects the frame in the bisector plane of the chord
/// `x_{i+1} - x_i`, then reflects again so the tangent lands on `t_{i+1}`.
/// Two reflections make a rotation, so orientation is preserved. Frames are
/// re-orthonormalized after every step with `xi_1` set to the exact tangent.
///
/// `initial` must be orthonormal and have `xi_1` equal to the unit tangent at
/// `grid[0]` (within 1e-6).
pub fn rmf_double_reflection(
    curve: &Curve,
    grid: &[f64],
    initial: &Frame,
    cfg: &ToleranceConfig,
) -> Result<FrameField> {
    check_grid(grid, 2)?;
    let n = curve.dim();
    initial.check_initial(n)?;
    let points = grid
        .iter()
        .map(|&s| curve.position(s))
        .collect::<Result<Vec<_>>>()?;
    let tangents = grid
        .iter()
        .map(|&s| curve.unit_tangent(s, cfg))
        .collect::<Result<Vec<_>>>()?;
    let mismatch = initial.tangent().distance(&tangents[0]);
    if mismatch > 1e-6 {
        return Err(Error::InvalidFrame(format!(
            "initial xi_1 differs from the curve tangent by {mismatch:e}"
        )));
    }

    let mut current = initial.clone();
    current.s = grid[0];
    current.vectors[0] = tangents[0].clone();
    current.reorthonormalize()?;
    let mut frames = Vec::with_capacity(grid.len());
    frames.push(current.clone());

    for i in 0..grid.len() - 1 {
        let v1 = &points[i + 1] - &points[i];
        let c1 = v1.dot(&v1);
        if c1.sqrt() <= 1e-14 {
            return Err(Error::DegenerateStep { index: i, next: i + 1 });
        }
        let mut vectors = current.vectors.clone();
        for v in vectors.iter_mut() {
            reflect(v, &v1, c1);
        }
        let v2 = &tangents[i + 1] - &vectors[0];
        let c2 = v2.dot(&v2);
        if c2 > 1e-30 {
            for v in vectors.iter_mut().skip(1) {
                reflect(v, &v2, c2);
            }
        }
        vectors[0] = tangents[i + 1].clone();
        let mut next = Frame::new(grid[i + 1], vectors)?;
        next.reorthonormalize()?;
        frames.push(next.clone());
        current = next;
    }
    FrameField::new(frames, curve.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::circular_helix::CircularHelix;
    use crate::framing::frenet_frame;
    use crate::numeric::linspace;

    #[test]
    fn planar_circle_keeps_binormal_fixed() {
        let cfg = ToleranceConfig::default();
        let c = builtin::circle(1.0, 3);
        let grid = linspace(0.0, 6.0, 601);
        let f0 = frenet_frame(&c, 0.0, &cfg).unwrap();
        let field = rmf_double_reflection(&c, &grid, &f0, &cfg).unwrap();
        for f in field.frames() {
            assert!((f.vectors()[2][2] - 1.0).abs() < 1e-12);
            assert!((f.determinant() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn helix_matches_bishop_normals() {
        let cfg = ToleranceConfig::default();
        let h = CircularHelix::default();
        let grid = linspace(0.0, 120.0, 2401);
        let f0 = frenet_frame(&builtin::helix(), 0.0, &cfg).unwrap();
        let field = rmf_double_reflection(&builtin::helix(), &grid, &f0, &cfg).unwrap();
        let mut worst: f64 = 0.0;
        for f in field.frames() {
            let (n1, n2) = h.bishop_normals(f.s);
            worst = worst.max(f.vectors()[1].distance(&n1)).max(f.vectors()[2].distance(&n2));
        }
        assert!(worst < 1e-5, "{worst}");
    }

    #[test]
    fn rejects_bad_initial_frames() {
        let cfg = ToleranceConfig::default();
        let c = builtin::helix();
        let grid = linspace(0.0, 1.0, 11);
        let wrong = Frame::identity(3, 0.0);
        assert!(matches!(rmf_double_reflection(&c, &grid, &wrong, &cfg), Err(Error::InvalidFrame(_))));
        let small = Frame::identity(2, 0.0);
        assert!(matches!(
            rmf_double_reflection(&c, &grid, &small, &cfg),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn coincident_points_are_rejected() {
        let cfg = ToleranceConfig::default();
        let p = |x: f64| VectorN::new(vec![x, x * x, 0.0]).unwrap();
        // the curve stalls between parameters 1 and 2
        let c = Curve::sampled(vec![0.0, 1.0, 2.0, 3.0, 4.0], vec![p(0.0), p(1.0), p(1.0), p(2.0), p(3.0)]).unwrap();
        let t0 = c.unit_tangent(0.0, &cfg).unwrap();
        let f0 = crate::framing::frame_from_tangent(&t0, 0.0).unwrap();
        let err = rmf_double_reflection(&c, &[0.0, 1.0, 2.0, 3.0], &f0, &cfg);
        assert!(matches!(err, Err(Error::DegenerateStep { index: 1, next: 2 })), "{err:?}");
    }
}
