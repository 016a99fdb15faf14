//! Rectifying-type curves built from RM curvatures: one coefficient on the
//! normal vectors is a function of arclength, the others are constants.
//!
//! For `psi = sum_i c_i xi_{i+1}` the frame system gives
//! `psi' = sum_i c_i' xi_{i+1} - (sum_i c_i k_i) xi_1`, so choosing the free
//! coefficient `c_j = -(sum_{i != j} c_i k_i) / k_j` leaves `psi'` parallel to
//! `xi_{j+1}`.

mod axis;
mod spherical;

pub use axis::{helix_axis, AxisReport, Constancy, VectorAngle};
pub use spherical::{fit_sphere, spherical_coefficients, spherical_factorization, SphereFit, SphericalCoefficients, SphericalFactor};

use serde::{Deserialize, Serialize};

use crate::config::ToleranceConfig;
use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::framing::{CurvatureField, FrameField};
use crate::numeric::{derivative_along, zero_crossings};
use crate::vector::VectorN;

/// Which coefficient is free (`type_index`, 1-based) and the constants that
/// fill the remaining slots in order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RectifyingSpec {
    pub n: usize,
    pub type_index: usize,
    pub constants: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free_coeff: Option<Vec<f64>>,
}

impl RectifyingSpec {
    pub fn new(n: usize, type_index: usize, constants: Vec<f64>) -> Result<Self> {
        let spec = Self {
            n,
            type_index,
            constants,
            free_coeff: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::InvalidSpec(format!("n must be at least 3, got {}", self.n)));
        }
        if !(1..self.n).contains(&self.type_index) {
            return Err(Error::InvalidSpec(format!(
                "type index must be in 1..={}, got {}",
                self.n - 1,
                self.type_index
            )));
        }
        if self.constants.len() != self.n - 2 {
            return Err(Error::InvalidSpec(format!(
                "expected {} constants, got {}",
                self.n - 2,
                self.constants.len()
            )));
        }
        if self.constants.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidSpec("constants must be finite".into()));
        }
        Ok(())
    }

    pub fn with_free_coeff(mut self, values: Vec<f64>) -> Self {
        self.free_coeff = Some(values);
        self
    }

    /// Slots (0-based, into `xi_2 .. xi_n`) holding constants, paired with them.
    pub fn fixed_slots(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        (0..self.n - 1)
            .filter(move |&i| i + 1 != self.type_index)
            .zip(self.constants.iter().copied())
    }

    /// Coefficients of `xi_2 .. xi_n` at sample `k`; needs `free_coeff`.
    pub fn coefficients_at(&self, k: usize) -> Result<Vec<f64>> {
        let free = self
            .free_coeff
            .as_ref()
            .ok_or_else(|| Error::InvalidSpec("free coefficient not derived".into()))?;
        let mut c = vec![0.0; self.n - 1];
        for (slot, value) in self.fixed_slots() {
            c[slot] = value;
        }
        c[self.type_index - 1] = free[k];
        Ok(c)
    }
}

/// Fills `free_coeff` so that the tangential part of `psi'` vanishes.
///
/// Errors with the offending locations when `k_{type_index}` gets within
/// `singular_guard` of zero or changes sign between samples.
pub fn derive_free_coefficient(
    curvatures: &CurvatureField,
    spec: &RectifyingSpec,
    cfg: &ToleranceConfig,
) -> Result<RectifyingSpec> {
    spec.validate()?;
    if curvatures.count() != spec.n - 1 {
        return Err(Error::DimensionMismatch {
            left: spec.n - 1,
            right: curvatures.count(),
        });
    }
    let j = spec.type_index - 1;
    if spec.constants.iter().all(|&c| c == 0.0) {
        return Ok(spec.clone().with_free_coeff(vec![0.0; curvatures.len()]));
    }
    let kj = curvatures.series(j);
    let zeros = zero_crossings(curvatures.params(), &kj, cfg.singular_guard);
    if !zeros.is_empty() {
        return Err(Error::Singularity {
            index: spec.type_index,
            locations: zeros,
        });
    }
    let values = (0..curvatures.len())
        .map(|k| {
            let ks = curvatures.at(k);
            let num: f64 = spec.fixed_slots().map(|(slot, c)| c * ks[slot]).sum();
            -num / ks[j]
        })
        .collect();
    Ok(spec.clone().with_free_coeff(values))
}

/// `psi(s) = sum_i c_i(s) xi_{i+1}(s)` sampled on the field's grid.
pub fn construct_type_curve(field: &FrameField, spec: &RectifyingSpec) -> Result<Curve> {
    check_alignment(field, spec)?;
    let points = (0..field.len())
        .map(|k| {
            let c = spec.coefficients_at(k)?;
            Ok(VectorN::combination(&c, field.frames()[k].normals()))
        })
        .collect::<Result<Vec<_>>>()?;
    Curve::sampled(field.params(), points)
}

fn check_alignment(field: &FrameField, spec: &RectifyingSpec) -> Result<()> {
    spec.validate()?;
    if field.dim() != spec.n {
        return Err(Error::DimensionMismatch {
            left: spec.n,
            right: field.dim(),
        });
    }
    match &spec.free_coeff {
        None => Err(Error::InvalidSpec("free coefficient not derived".into())),
        Some(f) if f.len() != field.len() => Err(Error::GridMismatch(format!(
            "free coefficient has {} samples, frame field has {}",
            f.len(),
            field.len()
        ))),
        Some(_) => Ok(()),
    }
}

/// Components of `psi'` along the frame, as maxima over interior samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeReport {
    /// `max |<psi', xi_1>|`
    pub tangent_residual: f64,
    /// `(slot, max |<psi', xi_{slot+1}>|)` for each fixed slot (1-based slot).
    pub fixed_slot_residuals: Vec<(usize, f64)>,
    /// `max |<psi', xi_{type_index+1}>|`, the part that is allowed to be nonzero.
    pub free_component: f64,
}

impl DerivativeReport {
    pub fn max_residual(&self) -> f64 {
        self.fixed_slot_residuals
            .iter()
            .map(|r| r.1)
            .fold(self.tangent_residual, f64::max)
    }
}

/// Differentiates the constructed curve numerically along the grid and
/// measures how far `psi'` is from being parallel to `xi_{type_index+1}`.
pub fn verify_derivative_rectifying(
    field: &FrameField,
    spec: &RectifyingSpec,
    _cfg: &ToleranceConfig,
) -> Result<DerivativeReport> {
    check_alignment(field, spec)?;
    if field.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: field.len(),
        });
    }
    let psi = construct_type_curve(field, spec)?;
    let params = field.params();
    let points: Vec<VectorN> = params.iter().map(|&s| psi.position(s)).collect::<Result<_>>()?;
    let d = derivative_along(&params, &points, 1);
    let interior = 1..params.len() - 1;
    let fixed: Vec<usize> = spec.fixed_slots().map(|(slot, _)| slot).collect();
    let mut tangent: f64 = 0.0;
    let mut free: f64 = 0.0;
    let mut slots = vec![0.0_f64; fixed.len()];
    for k in interior {
        let f = &field.frames()[k];
        tangent = tangent.max(d[k].dot(f.tangent()).abs());
        free = free.max(d[k].dot(&f.normals()[spec.type_index - 1]).abs());
        for (r, &slot) in slots.iter_mut().zip(&fixed) {
            *r = r.max(d[k].dot(&f.normals()[slot]).abs());
        }
    }
    Ok(DerivativeReport {
        tangent_residual: tangent,
        fixed_slot_residuals: fixed.iter().map(|s| s + 1).zip(slots).collect(),
        free_component: free,
    })
}
