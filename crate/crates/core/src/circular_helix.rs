//! Closed-form geometry of the unit-speed circular helix
//! `(a cos(s/c), a sin(s/c), b s/c)` with `c = sqrt(a^2 + b^2)`.
//!
//! Everything here is evaluated directly from formulas, never from the
//! numerical framing code, so it serves as an independent reference.

use crate::curve::Curve;
use crate::vector::VectorN;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircularHelix {
    pub radius: f64,
    pub pitch: f64,
}

impl Default for CircularHelix {
    /// radius 24, pitch 7, so `c = 25`.
    fn default() -> Self {
        Self {
            radius: 24.0,
            pitch: 7.0,
        }
    }
}

fn v3(x: f64, y: f64, z: f64) -> VectorN {
    VectorN::new(vec![x, y, z]).expect("finite helix data")
}

impl CircularHelix {
    pub fn c(&self) -> f64 {
        self.radius.hypot(self.pitch)
    }

    pub fn curvature(&self) -> f64 {
        self.radius / self.c().powi(2)
    }

    pub fn torsion(&self) -> f64 {
        self.pitch / self.c().powi(2)
    }

    /// Rotation angle of the Bishop normals relative to the Frenet normals,
    /// `theta(s) = tau * s`.
    pub fn theta(&self, s: f64) -> f64 {
        self.torsion() * s
    }

    pub fn position(&self, s: f64) -> VectorN {
        let (a, b, c) = (self.radius, self.pitch, self.c());
        v3(a * (s / c).cos(), a * (s / c).sin(), b * s / c)
    }

    pub fn tangent(&self, s: f64) -> VectorN {
        let (a, b, c) = (self.radius, self.pitch, self.c());
        v3(-a / c * (s / c).sin(), a / c * (s / c).cos(), b / c)
    }

    pub fn normal(&self, s: f64) -> VectorN {
        let c = self.c();
        v3(-(s / c).cos(), -(s / c).sin(), 0.0)
    }

    pub fn binormal(&self, s: f64) -> VectorN {
        let (a, b, c) = (self.radius, self.pitch, self.c());
        v3(b / c * (s / c).sin(), -b / c * (s / c).cos(), a / c)
    }

    /// Bishop normals started from the Frenet frame at `s = 0`:
    /// `N1 = cos(theta) N - sin(theta) B`, `N2 = sin(theta) N + cos(theta) B`.
    pub fn bishop_normals(&self, s: f64) -> (VectorN, VectorN) {
        let th = self.theta(s);
        let (n, b) = (self.normal(s), self.binormal(s));
        let n1 = &(&n * th.cos()) - &(&b * th.sin());
        let n2 = &(&n * th.sin()) + &(&b * th.cos());
        (n1, n2)
    }

    /// `(k1, k2) = (kappa cos(theta), kappa sin(theta))`.
    pub fn bishop_curvatures(&self, s: f64) -> (f64, f64) {
        let th = self.theta(s);
        (self.curvature() * th.cos(), self.curvature() * th.sin())
    }

    /// Type-1 curve on the Bishop basis, `-c (k2/k1) N1 + c N2`.
    pub fn type1_curve(&self, s: f64, c: f64) -> VectorN {
        let (n1, n2) = self.bishop_normals(s);
        &(&n1 * (-c * self.theta(s).tan())) + &(&n2 * c)
    }

    /// Type-2 curve on the Bishop basis, `c N1 - c (k1/k2) N2`.
    pub fn type2_curve(&self, s: f64, c: f64) -> VectorN {
        let (n1, n2) = self.bishop_normals(s);
        &(&n1 * c) - &(&n2 * (c / self.theta(s).tan()))
    }

    /// First positive parameter where `k1 = kappa cos(theta)` vanishes.
    pub fn first_k1_zero(&self) -> f64 {
        std::f64::consts::FRAC_PI_2 / self.torsion()
    }

    /// Zeros of `k1` inside `[a, b]`.
    pub fn k1_zeros_in(&self, a: f64, b: f64) -> Vec<f64> {
        let period = std::f64::consts::PI / self.torsion();
        let first = self.first_k1_zero();
        let mut m = ((a - first) / period).ceil();
        let mut out = Vec::new();
        loop {
            let z = first + m * period;
            if z > b {
                break;
            }
            if z >= a {
                out.push(z);
            }
            m += 1.0;
        }
        out
    }

    /// The helix as an analytic curve with exact derivatives.
    pub fn curve(&self, domain: (f64, f64)) -> Curve {
        let (a, b, c) = (self.radius, self.pitch, self.c());
        Curve::analytic(3, domain, move |s| vec![a * (s / c).cos(), a * (s / c).sin(), b * s / c])
            .and_then(|cv| cv.with_derivative(1, move |s| vec![-a / c * (s / c).sin(), a / c * (s / c).cos(), b / c]))
            .and_then(|cv| {
                cv.with_derivative(2, move |s| vec![-a / (c * c) * (s / c).cos(), -a / (c * c) * (s / c).sin(), 0.0])
            })
            .and_then(|cv| {
                cv.with_derivative(3, move |s| {
                    vec![a / (c * c * c) * (s / c).sin(), -a / (c * c * c) * (s / c).cos(), 0.0]
                })
            })
            .expect("helix curve")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values_at_zero() {
        let h = CircularHelix::default();
        assert_eq!(h.c(), 25.0);
        assert!((h.curvature() - 0.0384).abs() < 1e-17);
        assert!((h.torsion() - 0.0112).abs() < 1e-17);
        let t = h.tangent(0.0);
        assert!((t[1] - 0.96).abs() < 1e-15 && (t[2] - 0.28).abs() < 1e-15 && t[0] == 0.0);
        let b = h.binormal(0.0);
        assert!((b[1] + 0.28).abs() < 1e-15 && (b[2] - 0.96).abs() < 1e-15);
        let (n1, n2) = h.bishop_normals(0.0);
        assert_eq!(n1.as_slice(), h.normal(0.0).as_slice());
        assert!(n2.distance(&b) < 1e-15);
        assert!(h.type1_curve(0.0, 1.0).distance(&b) < 1e-15);
    }

    #[test]
    fn bishop_normals_match_expanded_components() {
        // componentwise expansion of N1, N2 in terms of s/25 and 7s/625
        let h = CircularHelix::default();
        for s in [0.0f64, 3.7, 50.0, 110.0] {
            let (p, q) = (s / 25.0, 7.0 * s / 625.0);
            let n1 = [
                -q.cos() * p.cos() - 7.0 / 25.0 * q.sin() * p.sin(),
                -q.cos() * p.sin() + 7.0 / 25.0 * p.cos() * q.sin(),
                -24.0 / 25.0 * q.sin(),
            ];
            let n2 = [
                -q.sin() * p.cos() + 7.0 / 25.0 * q.cos() * p.sin(),
                -q.sin() * p.sin() - 7.0 / 25.0 * q.cos() * p.cos(),
                24.0 / 25.0 * q.cos(),
            ];
            let (a, b) = h.bishop_normals(s);
            for k in 0..3 {
                assert!((a[k] - n1[k]).abs() < 1e-14 && (b[k] - n2[k]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn first_zero_location() {
        let h = CircularHelix::default();
        let z = h.first_k1_zero();
        assert!((z - 625.0 * std::f64::consts::PI / 14.0).abs() < 1e-12);
        assert!(h.bishop_curvatures(z).0.abs() < 1e-15);
        assert_eq!(h.k1_zeros_in(0.0, 120.0), Vec::<f64>::new());
        assert_eq!(h.k1_zeros_in(0.0, 150.0).len(), 1);
    }
}
