use serde::{Deserialize, Serialize};

use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::framing::FrameField;
use crate::numeric::{mean, std_dev};
use crate::vector::VectorN;

use super::{check_alignment, RectifyingSpec};

/// Three-way constancy verdict for a sampled coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Constancy {
    Constant,
    Indeterminate,
    NonConstant,
}

impl Constancy {
    /// Relative standard deviation `std / max(|mean|, 1)`: below 1e-6 is
    /// constant, below 1e-3 indeterminate.
    pub fn of(values: &[f64]) -> (Constancy, f64) {
        let variation = std_dev(values) / mean(values).abs().max(1.0);
        let verdict = if variation < 1e-6 {
            Constancy::Constant
        } else if variation < 1e-3 {
            Constancy::Indeterminate
        } else {
            Constancy::NonConstant
        };
        (verdict, variation)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorAngle {
    /// 1-based frame index: the integral curve of `xi_index`.
    pub index: usize,
    pub mean_cos: f64,
    /// `max |<xi_index, U_hat> - mean_cos|`
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisReport {
    pub axis: VectorN,
    pub unit_axis: VectorN,
    /// `max_s |U(s) - U(s_min)|`
    pub constancy_residual: f64,
    pub coefficient_variation: f64,
    pub angles: Vec<VectorAngle>,
}

impl AxisReport {
    pub fn angle_residual(&self) -> f64 {
        self.angles.iter().map(|a| a.residual).fold(0.0, f64::max)
    }
}

/// With a constant free coefficient, `U = sum_i c_i xi_{i+1}` is a fixed
/// vector and every integral curve `int xi_i ds` keeps a constant angle with
/// it. Reports how well both hold on the sampled field.
pub fn helix_axis(field: &FrameField, spec: &RectifyingSpec, _cfg: &ToleranceConfig) -> Result<AxisReport> {
    check_alignment(field, spec)?;
    let free = spec.free_coeff.as_ref().unwrap();
    let (verdict, variation) = Constancy::of(free);
    if verdict != Constancy::Constant {
        return Err(Error::NotConstant { variation });
    }
    let us = (0..field.len())
        .map(|k| Ok(VectorN::combination(&spec.coefficients_at(k)?, field.frames()[k].normals())))
        .collect::<Result<Vec<_>>>()?;
    let axis = us[0].clone();
    let unit = axis.normalized().ok_or(Error::ZeroVector { s: field.frames()[0].s })?;
    let constancy_residual = us.iter().map(|u| u.distance(&axis)).fold(0.0, f64::max);
    let angles = (0..field.dim())
        .map(|i| {
            let cos: Vec<f64> = field.frames().iter().map(|f| f.vectors()[i].dot(&unit)).collect();
            let m = mean(&cos);
            VectorAngle {
                index: i + 1,
                mean_cos: m,
                residual: cos.iter().map(|c| (c - m).abs()).fold(0.0, f64::max),
            }
        })
        .collect();
    Ok(AxisReport {
        axis,
        unit_axis: unit,
        constancy_residual,
        coefficient_variation: variation,
        angles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::framing::{frenet_as_rmf, initial_frame, rmf_double_reflection};
    use crate::numeric::linspace;
    use crate::rectifying::derive_free_coefficient;

    #[test]
    fn constancy_thresholds() {
        assert_eq!(Constancy::of(&[2.0, 2.0, 2.0]).0, Constancy::Constant);
        assert_eq!(Constancy::of(&[1.0, 1.0 + 1e-4]).0, Constancy::Indeterminate);
        assert_eq!(Constancy::of(&[0.0, 1.0]).0, Constancy::NonConstant);
    }

    #[test]
    fn helix_axis_from_frenet_basis() {
        let cfg = ToleranceConfig::default();
        let grid = linspace(0.0, 120.0, 1201);
        let (field, curv) = frenet_as_rmf(&builtin::helix(), &grid, &cfg).unwrap();
        let spec = derive_free_coefficient(&curv, &RectifyingSpec::new(3, 2, vec![1.0]).unwrap(), &cfg).unwrap();
        let report = helix_axis(&field, &spec, &cfg).unwrap();
        assert!(report.unit_axis.distance(&VectorN::basis(3, 2)) < 1e-12);
        assert!((report.axis.norm() - 25.0 / 24.0).abs() < 1e-12);
        assert!(report.constancy_residual < 1e-12);
        // xi_1 = N is orthogonal to the axis, xi_2 = B and xi_3 = T are not
        let cos: Vec<f64> = report.angles.iter().map(|a| a.mean_cos).collect();
        assert!(cos[0].abs() < 1e-12 && (cos[1] - 0.96).abs() < 1e-12 && (cos[2] - 0.28).abs() < 1e-12);
        assert!(report.angle_residual() < 1e-12);
    }

    #[test]
    fn varying_coefficient_is_refused() {
        let cfg = ToleranceConfig::default();
        let c = builtin::helix();
        let grid = linspace(0.0, 50.0, 501);
        let f0 = initial_frame(&c, 0.0, &cfg).unwrap();
        let field = rmf_double_reflection(&c, &grid, &f0, &cfg).unwrap();
        let spec = RectifyingSpec::new(3, 1, vec![1.0]).unwrap().with_free_coeff(grid.clone());
        assert!(matches!(helix_axis(&field, &spec, &cfg), Err(Error::NotConstant { .. })));
    }

    #[test]
    fn straight_line_any_constant_spec() {
        let cfg = ToleranceConfig::default();
        let c = builtin::line(3);
        let grid = linspace(0.0, 1.0, 11);
        let f0 = initial_frame(&c, 0.0, &cfg).unwrap();
        let field = rmf_double_reflection(&c, &grid, &f0, &cfg).unwrap();
        let spec = RectifyingSpec::new(3, 2, vec![0.4]).unwrap().with_free_coeff(vec![1.3; 11]);
        let report = helix_axis(&field, &spec, &cfg).unwrap();
        assert_eq!(report.constancy_residual, 0.0);
        assert!(report.angle_residual() < 1e-15);
    }
}
