use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::numeric::derivative_along;
use crate::vector::VectorN;

use super::{CurvatureField, FrameField};

fn project(field: &FrameField, i: usize, d: &VectorN) -> (Vec<f64>, f64) {
    let frame = &field.frames()[i];
    let k: Vec<f64> = frame.normals().iter().map(|v| d.dot(v)).collect();
    let mut r = d.clone();
    for (kj, v) in k.iter().zip(frame.normals()) {
        r.axpy(-kj, v);
    }
    (k, r.norm())
}

fn speeds(field: &FrameField, cfg: &ToleranceConfig) -> Result<Vec<f64>> {
    field
        .frames()
        .iter()
        .map(|f| {
            let v = field.base_curve().speed(f.s, cfg)?;
            if v <= cfg.singular_guard {
                return Err(Error::SingularCurve { s: f.s });
            }
            Ok(v)
        })
        .collect()
}

/// RM curvatures `k_j = <xi_1', xi_{j+1}>` per unit arclength, with `xi_1'`
/// taken by finite differences along the field itself (second order in the
/// sample spacing). Residuals `|xi_1' - sum_j k_j xi_{j+1}|` are attached.
pub fn rm_curvatures(field: &FrameField, cfg: &ToleranceConfig) -> Result<CurvatureField> {
    if field.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: field.len(),
        });
    }
    let params = field.params();
    let d = derivative_along(&params, &field.vector_series(0), 1);
    let speed = speeds(field, cfg)?;
    let mut values = Vec::with_capacity(params.len());
    let mut residuals = Vec::with_capacity(params.len());
    for i in 0..params.len() {
        let (k, r) = project(field, i, &(&d[i] * (1.0 / speed[i])));
        values.push(k);
        residuals.push(r);
    }
    let mut out = CurvatureField::new(params, values)?;
    out.residuals = Some(residuals);
    Ok(out)
}

/// RM curvatures with `xi_1'` replaced by the derivative of the base curve's
/// unit tangent, `T' = (a'' - <a'', T> T) / |a'|^2`, evaluated from the
/// curve itself. For analytic curves this is exact up to the frame error.
pub fn rm_curvatures_from_curve(field: &FrameField, cfg: &ToleranceConfig) -> Result<CurvatureField> {
    let curve = field.base_curve();
    let params = field.params();
    let mut values = Vec::with_capacity(params.len());
    let mut residuals = Vec::with_capacity(params.len());
    for (i, &s) in params.iter().enumerate() {
        let d1 = curve.derivative_with_edges(s, 1, cfg)?;
        let d2 = curve.derivative_with_edges(s, 2, cfg)?;
        let v2 = d1.dot(&d1);
        if v2.sqrt() <= cfg.singular_guard {
            return Err(Error::SingularCurve { s });
        }
        let t = &d1 * (1.0 / v2.sqrt());
        let mut tp = d2.clone();
        tp.axpy(-d2.dot(&t), &t);
        let tp = tp * (1.0 / v2);
        let (k, r) = project(field, i, &tp);
        values.push(k);
        residuals.push(r);
    }
    let mut out = CurvatureField::new(params, values)?;
    out.residuals = Some(residuals);
    Ok(out)
}

/// Curvatures per unit of the sample parameter, `k_j |a'(s)|`: the rates
/// the frame actually turns at along a curve that is not unit speed. This is
/// what [`rmf_ode`](super::rmf_ode) integrates.
pub fn per_parameter(curvatures: &CurvatureField, curve: &crate::curve::Curve, cfg: &ToleranceConfig) -> Result<CurvatureField> {
    let values = curvatures
        .params()
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let v = curve.speed(s, cfg)?;
            Ok(curvatures.at(i).iter().map(|k| k * v).collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    CurvatureField::new(curvatures.params().to_vec(), values)
}
