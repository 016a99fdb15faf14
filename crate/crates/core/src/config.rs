use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical knobs shared by every operation.
///
/// Finite-difference steps are per derivative order: the roundoff of an
/// order-`k` central stencil grows like `eps * |f| / h^k`, so higher orders
/// need wider steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Step for first derivatives.
    pub fd_step: f64,
    /// Step for second derivatives.
    pub fd_step_second: f64,
    /// Step for third derivatives.
    pub fd_step_third: f64,
    pub ortho_tol: f64,
    pub residual_tol: f64,
    /// Smallest magnitude accepted as a divisor (curvatures, speeds, Gram determinants).
    pub singular_guard: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            fd_step: 1e-5,
            fd_step_second: 1e-3,
            fd_step_third: 2e-2,
            ortho_tol: 1e-9,
            residual_tol: 1e-5,
            singular_guard: 1e-8,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("fd_step", self.fd_step),
            ("fd_step_second", self.fd_step_second),
            ("fd_step_third", self.fd_step_third),
            ("ortho_tol", self.ortho_tol),
            ("residual_tol", self.residual_tol),
            ("singular_guard", self.singular_guard),
        ];
        for (name, value) in fields {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be finite and > 0, got {value}"
                )));
            }
        }
        Ok(())
    }

    /// Finite-difference step used for a derivative of `order` (1..=3).
    pub fn step_for(&self, order: usize) -> f64 {
        match order {
            1 => self.fd_step,
            2 => self.fd_step_second,
            _ => self.fd_step_third,
        }
    }

    /// Same steps for every order; handy for convergence studies.
    pub fn with_uniform_step(mut self, h: f64) -> Self {
        self.fd_step = h;
        self.fd_step_second = h;
        self.fd_step_third = h;
        self
    }

    pub fn with_residual_tol(mut self, tol: f64) -> Self {
        self.residual_tol = tol;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        ToleranceConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_non_positive() {
        let cfg = ToleranceConfig {
            ortho_tol: 0.0,
            ..Default::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::InvalidConfig(_))));
        let cfg = ToleranceConfig {
            fd_step: f64::NAN,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }
}
