//! Points and directions in R^n with the dimension carried at runtime.

use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VectorN {
    components: Vec<f64>,
}

impl VectorN {
    /// Builds a vector, rejecting `dim < 2` and non-finite components.
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.len() < 2 {
            return Err(Error::InvalidVector(format!(
                "dimension must be at least 2, got {}",
                components.len()
            )));
        }
        if let Some(i) = components.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidVector(format!("component {i} is not finite")));
        }
        Ok(Self { components })
    }

    /// Unchecked constructor for internal arithmetic where the inputs are
    /// already known to be valid.
    pub(crate) fn from_vec(components: Vec<f64>) -> Self {
        debug_assert!(components.len() >= 2);
        Self { components }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_vec(vec![0.0; dim])
    }

    /// The `i`-th ambient basis vector (0-based).
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        Self::from_vec(v)
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.components
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.components
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(|c| c.is_finite())
    }

    /// Dot product without the dimension check; callers guarantee equal dims.
    #[inline]
    pub fn dot(&self, other: &VectorN) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a * b)
            .sum()
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(&self) -> Option<VectorN> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self * (1.0 / n))
    }

    /// `self += alpha * x`
    #[inline]
    pub fn axpy(&mut self, alpha: f64, x: &VectorN) {
        debug_assert_eq!(self.dim(), x.dim());
        for (a, b) in self.components.iter_mut().zip(&x.components) {
            *a += alpha * b;
        }
    }

    pub fn distance(&self, other: &VectorN) -> f64 {
        (self - other).norm()
    }

    /// Linear combination `sum_i weights[i] * vectors[i]`.
    pub fn combination(weights: &[f64], vectors: &[VectorN]) -> VectorN {
        debug_assert_eq!(weights.len(), vectors.len());
        let mut out = VectorN::zeros(vectors[0].dim());
        for (w, v) in weights.iter().zip(vectors) {
            out.axpy(*w, v);
        }
        out
    }
}

/// Standard inner product; errors when the dimensions differ.
pub fn inner(u: &VectorN, v: &VectorN) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    Ok(u.dot(v))
}

pub fn norm(u: &VectorN) -> f64 {
    u.norm()
}

impl Index<usize> for VectorN {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.components[i]
    }
}

impl Add for &VectorN {
    type Output = VectorN;
    fn add(self, rhs: &VectorN) -> VectorN {
        debug_assert_eq!(self.dim(), rhs.dim());
        VectorN::from_vec(
            self.components
                .iter()
                .zip(&rhs.components)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Add for VectorN {
    type Output = VectorN;
    fn add(self, rhs: VectorN) -> VectorN {
        &self + &rhs
    }
}

impl Sub for &VectorN {
    type Output = VectorN;
    fn sub(self, rhs: &VectorN) -> VectorN {
        debug_assert_eq!(self.dim(), rhs.dim());
        VectorN::from_vec(
            self.components
                .iter()
                .zip(&rhs.components)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Sub for VectorN {
    type Output = VectorN;
    fn sub(self, rhs: VectorN) -> VectorN {
        &self - &rhs
    }
}

impl AddAssign<&VectorN> for VectorN {
    fn add_assign(&mut self, rhs: &VectorN) {
        self.axpy(1.0, rhs);
    }
}

impl SubAssign<&VectorN> for VectorN {
    fn sub_assign(&mut self, rhs: &VectorN) {
        self.axpy(-1.0, rhs);
    }
}

impl Mul<f64> for &VectorN {
    type Output = VectorN;
    fn mul(self, rhs: f64) -> VectorN {
        VectorN::from_vec(self.components.iter().map(|a| a * rhs).collect())
    }
}

impl Mul<f64> for VectorN {
    type Output = VectorN;
    fn mul(mut self, rhs: f64) -> VectorN {
        self.components.iter_mut().for_each(|a| *a *= rhs);
        self
    }
}

impl Neg for &VectorN {
    type Output = VectorN;
    fn neg(self) -> VectorN {
        self * -1.0
    }
}

impl Neg for VectorN {
    type Output = VectorN;
    fn neg(self) -> VectorN {
        self * -1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(c: &[f64]) -> VectorN {
        VectorN::new(c.to_vec()).unwrap()
    }

    #[test]
    fn inner_examples() {
        assert_eq!(inner(&v(&[1.0, 0.0, 0.0]), &v(&[0.0, 1.0, 0.0])).unwrap(), 0.0);
        assert_eq!(inner(&v(&[1.0, 2.0, 3.0]), &v(&[4.0, 5.0, 6.0])).unwrap(), 32.0);
        let t0 = v(&[0.0, 24.0 / 25.0, 7.0 / 25.0]);
        assert!((inner(&t0, &t0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn inner_dimension_mismatch_names_both() {
        let err = inner(&v(&[1.0, 2.0]), &v(&[1.0, 2.0, 3.0])).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains('2') && msg.contains('3'), "{msg}");
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm(&v(&[0.0, 0.0, 0.0])), 0.0);
        assert_eq!(norm(&v(&[3.0, 4.0])), 5.0);
        assert!((norm(&v(&[0.0, -7.0 / 25.0, 24.0 / 25.0])) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_components() {
        assert!(VectorN::new(vec![1.0]).is_err());
        assert!(VectorN::new(vec![1.0, f64::NAN]).is_err());
        assert!(VectorN::new(vec![f64::INFINITY, 0.0]).is_err());
    }

    fn vec_pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>)> {
        (2usize..8).prop_flat_map(|n| {
            (
                prop::collection::vec(-10.0f64..10.0, n),
                prop::collection::vec(-10.0f64..10.0, n),
                prop::collection::vec(-10.0f64..10.0, n),
            )
        })
    }

    proptest! {
        #[test]
        fn inner_symmetric_bilinear((a, b, c) in vec_pair(), alpha in -5.0f64..5.0) {
            let (a, b, c) = (v(&a), v(&b), v(&c));
            prop_assert_eq!(inner(&a, &b).unwrap(), inner(&b, &a).unwrap());
            let lhs = inner(&(&(&a * alpha) + &c), &b).unwrap();
            let rhs = alpha * inner(&a, &b).unwrap() + inner(&c, &b).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        }

        #[test]
        fn norm_squared_is_self_inner((a, _, _) in vec_pair()) {
            let a = v(&a);
            let n2 = norm(&a).powi(2);
            let ip = inner(&a, &a).unwrap();
            prop_assert!((n2 - ip).abs() <= 1e-12 * ip.max(1e-300));
        }
    }
}
