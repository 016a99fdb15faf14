//! Named curves with exact derivatives, so examples and checks run without
//! external data.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::circular_helix::CircularHelix;
use crate::curve::Curve;
use crate::error::{Error, Result};

/// `s -> (s, 0, ..., 0)` on `[0, 1]`.
pub fn line(dim: usize) -> Curve {
    let pad = move |mut v: Vec<f64>| {
        v.resize(dim, 0.0);
        v
    };
    Curve::analytic(dim, (0.0, 1.0), move |s| pad(vec![s]))
        .and_then(|c| c.with_derivative(1, move |_| pad(vec![1.0])))
        .and_then(|c| c.with_derivative(2, move |_| vec![0.0; dim]))
        .and_then(|c| c.with_derivative(3, move |_| vec![0.0; dim]))
        .expect("line builtin")
}

/// Unit-speed circle of radius `r` in the first coordinate plane, on `[0, 2 pi r]`.
pub fn circle(r: f64, dim: usize) -> Curve {
    planar_circle(r, dim, [1.0, 0.0, 0.0], [0.0, 1.0, 0.0])
}

/// Unit-speed great circle of the sphere of radius `r` about the origin,
/// in a plane tilted 45 degrees about the first axis.
pub fn great_circle(r: f64) -> Curve {
    planar_circle(r, 3, [1.0, 0.0, 0.0], [0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2])
}

fn planar_circle(r: f64, dim: usize, u: [f64; 3], v: [f64; 3]) -> Curve {
    let combine = move |a: f64, b: f64| -> Vec<f64> {
        let mut out = vec![0.0; dim];
        for k in 0..3.min(dim) {
            out[k] = a * u[k] + b * v[k];
        }
        out
    };
    Curve::analytic(dim, (0.0, 2.0 * PI * r), move |s| combine(r * (s / r).cos(), r * (s / r).sin()))
        .and_then(|c| c.with_derivative(1, move |s| combine(-(s / r).sin(), (s / r).cos())))
        .and_then(|c| c.with_derivative(2, move |s| combine(-(s / r).cos() / r, -(s / r).sin() / r)))
        .and_then(|c| c.with_derivative(3, move |s| combine((s / r).sin() / (r * r), -(s / r).cos() / (r * r))))
        .expect("circle builtin")
}

/// The circular helix `(24 cos(s/25), 24 sin(s/25), 7s/25)` on `[0, 120]`.
pub fn helix() -> Curve {
    CircularHelix::default().curve((0.0, 120.0))
}

/// `(t, t^2, t^3)` on `[-1, 1]`.
pub fn twisted_cubic() -> Curve {
    Curve::analytic(3, (-1.0, 1.0), |t| vec![t, t * t, t * t * t])
        .and_then(|c| c.with_derivative(1, |t| vec![1.0, 2.0 * t, 3.0 * t * t]))
        .and_then(|c| c.with_derivative(2, |t| vec![0.0, 2.0, 6.0 * t]))
        .and_then(|c| c.with_derivative(3, |_| vec![0.0, 0.0, 6.0]))
        .expect("twisted cubic builtin")
}

pub const NAMES: &[&str] = &["line", "circle", "helix", "great-circle", "twisted-cubic"];

/// Looks up a builtin by name. `circle` and `great-circle` accept a radius
/// suffix (`circle:2`); `dim` applies to `line` and `circle`.
pub fn by_name(name: &str, dim: Option<usize>) -> Result<Curve> {
    let (base, arg) = match name.split_once(':') {
        Some((b, a)) => (b, Some(a)),
        None => (name, None),
    };
    let radius = match arg {
        Some(a) => {
            let r: f64 = a
                .parse()
                .map_err(|_| Error::Usage(format!("invalid radius '{a}' in curve name '{name}'")))?;
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::Usage(format!("radius must be positive, got {r}")));
            }
            r
        }
        None => 1.0,
    };
    let fixed3 = |curve: Curve| -> Result<Curve> {
        match dim {
            Some(d) if d != 3 => Err(Error::Usage(format!("builtin '{base}' is 3-dimensional, --dim {d} given"))),
            _ => Ok(curve),
        }
    };
    match base {
        "line" if arg.is_none() => Ok(line(dim.unwrap_or(3).max(2))),
        "circle" => {
            let d = dim.unwrap_or(3);
            if d < 2 {
                return Err(Error::Usage("circle needs --dim >= 2".into()));
            }
            Ok(circle(radius, d))
        }
        "great-circle" => fixed3(great_circle(radius)),
        "helix" if arg.is_none() => fixed3(helix()),
        "twisted-cubic" if arg.is_none() => fixed3(twisted_cubic()),
        _ => Err(Error::Usage(format!(
            "unknown builtin curve '{name}' (known: {})",
            NAMES.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ToleranceConfig;

    #[test]
    fn exact_derivatives_agree_with_finite_differences() {
        let cfg = ToleranceConfig::default();
        for name in ["line", "circle:2", "helix", "great-circle:3", "twisted-cubic"] {
            let c = by_name(name, None).unwrap();
            let (a, b) = c.domain();
            let s = a + 0.37 * (b - a);
            let fd = Curve::analytic(c.dim(), c.domain(), {
                let c = c.clone();
                move |t| c.position(t).unwrap().into_vec()
            })
            .unwrap();
            for order in 1..=3 {
                let e = crate::curve::derivative(&c, s, order, &cfg).unwrap();
                let f = crate::curve::derivative(&fd, s, order, &cfg).unwrap();
                assert!((&e - &f).norm() < 1e-5 * (1.0 + e.norm()), "{name} order {order}");
            }
        }
    }

    #[test]
    fn unit_speed_circles() {
        let cfg = ToleranceConfig::default();
        for r in [1.0, 2.0, 3.0] {
            let c = great_circle(r);
            assert!((c.speed(1.0, &cfg).unwrap() - 1.0).abs() < 1e-14);
            assert!((c.position(0.7).unwrap().norm() - r).abs() < 1e-12);
        }
    }

    #[test]
    fn unknown_names_are_usage_errors() {
        assert!(matches!(by_name("spiral", None), Err(Error::Usage(_))));
        assert!(matches!(by_name("circle:-1", None), Err(Error::Usage(_))));
        assert!(matches!(by_name("helix", Some(4)), Err(Error::Usage(_))));
    }
}
