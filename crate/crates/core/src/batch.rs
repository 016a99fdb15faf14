//! Many-curve workloads: random smooth test curves, the frame invariant
//! suite, and batch classification. Each runs sequentially or, with the
//! `parallel` feature, on the rayon pool; results are identical either way.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{classify_curve, ClassificationReport};
use crate::config::ToleranceConfig;
use crate::curve::Curve;
use crate::error::Result;
use crate::framing::{initial_frame, per_parameter, rm_curvatures_from_curve, rmf_double_reflection, rmf_ode, FrameField};
use crate::numeric::{derivative_along, linspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        return Strategy::Parallel;
        #[cfg(not(feature = "parallel"))]
        Strategy::Sequential
    }
}

/// Order-preserving map over `items` with the chosen strategy.
pub fn map_items<T, R, F>(items: &[T], strategy: Strategy, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match strategy {
        Strategy::Sequential => items.iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Strategy::Parallel => items.par_iter().map(f).collect(),
    }
}

const HARMONICS: usize = 3;

/// Random smooth curve on `[0, 2]`: a unit-speed line plus small
/// trigonometric terms, seeded by `(seed, index)` so any curve can be
/// regenerated on its own. The perturbation's derivative is bounded by 0.5,
/// so the speed stays in `[0.5, 1.5]`.
pub fn random_trig_curve(seed: u64, index: u64, dim: usize) -> Curve {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut dir: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let len = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-3);
    dir.iter_mut().for_each(|x| *x /= len);
    let omega = rng.gen_range(0.5..2.0);
    // coefficient vectors a_k, b_k; sum_k k omega (|a_k| + |b_k|) <= 0.5
    let mut a = vec![vec![0.0; dim]; HARMONICS];
    let mut b = vec![vec![0.0; dim]; HARMONICS];
    let mut budget = 0.0;
    for k in 0..HARMONICS {
        for i in 0..dim {
            a[k][i] = rng.gen_range(-1.0..1.0);
            b[k][i] = rng.gen_range(-1.0..1.0);
        }
        let norm = |v: &Vec<f64>| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        budget += (k + 1) as f64 * omega * (norm(&a[k]) + norm(&b[k]));
    }
    let scale = rng.gen_range(0.2..0.5) / budget;
    for v in a.iter_mut().chain(b.iter_mut()) {
        v.iter_mut().for_each(|x| *x *= scale);
    }
    let eval = move |t: f64, order: usize| -> Vec<f64> {
        let mut out: Vec<f64> = match order {
            0 => dir.iter().map(|d| d * t).collect(),
            1 => dir.clone(),
            _ => vec![0.0; dim],
        };
        for k in 0..HARMONICS {
            let w = (k + 1) as f64 * omega;
            let (s, c) = (w * t).sin_cos();
            // derivatives of (sin, cos) cycle with period 4
            let (ds, dc) = match order % 4 {
                0 => (s, c),
                1 => (c, -s),
                2 => (-s, -c),
                _ => (-c, s),
            };
            let f = w.powi(order as i32);
            for i in 0..dim {
                out[i] += f * (a[k][i] * ds + b[k][i] * dc);
            }
        }
        out
    };
    let e = std::sync::Arc::new(eval);
    let (e0, e1, e2, e3) = (e.clone(), e.clone(), e.clone(), e);
    Curve::analytic(dim, (0.0, 2.0), move |t| e0(t, 0))
        .and_then(|c| c.with_derivative(1, move |t| e1(t, 1)))
        .and_then(|c| c.with_derivative(2, move |t| e2(t, 2)))
        .and_then(|c| c.with_derivative(3, move |t| e3(t, 3)))
        .expect("random curve")
}

/// Invariants of one frame field.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct FieldCheck {
    pub orthonormality: f64,
    /// `max |det - 1|`
    pub determinant: f64,
    /// `max |xi_j' - <xi_j', xi_1> xi_1| / max(1, |xi_j'|)` over interior samples, j >= 2
    pub rm_residual: f64,
}

impl FieldCheck {
    fn merge(self, o: FieldCheck) -> FieldCheck {
        FieldCheck {
            orthonormality: self.orthonormality.max(o.orthonormality),
            determinant: self.determinant.max(o.determinant),
            rm_residual: self.rm_residual.max(o.rm_residual),
        }
    }
}

pub fn check_field(field: &FrameField) -> FieldCheck {
    let params = field.params();
    let mut check = FieldCheck {
        orthonormality: field.max_orthonormality_error(),
        determinant: field.frames().iter().map(|f| (f.determinant() - 1.0).abs()).fold(0.0, f64::max),
        rm_residual: 0.0,
    };
    if params.len() < 3 {
        return check;
    }
    for j in 1..field.dim() {
        let d = derivative_along(&params, &field.vector_series(j), 1);
        for k in 1..params.len() - 1 {
            let t = field.frames()[k].tangent();
            let mut perp = d[k].clone();
            perp.axpy(-d[k].dot(t), t);
            check.rm_residual = check.rm_residual.max(perp.norm() / d[k].norm().max(1.0));
        }
    }
    check
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub curves: usize,
    pub failures: usize,
    pub double_reflection: FieldCheck,
    pub ode: FieldCheck,
}

/// Frames `count` random curves (dimensions cycling through `dims`) by
/// double reflection and by integrating the curvatures of that field, and
/// records the worst invariant violations. Curves whose framing errors are
/// counted in `failures`.
pub fn frame_invariant_suite(
    count: usize,
    dims: &[usize],
    step: f64,
    seed: u64,
    strategy: Strategy,
    cfg: &ToleranceConfig,
) -> SuiteSummary {
    let indices: Vec<usize> = (0..count).collect();
    let n = (2.0 / step).round() as usize + 1;
    let grid = linspace(0.0, 2.0, n);
    let results = map_items(&indices, strategy, |&i| -> Result<(FieldCheck, FieldCheck)> {
        let curve = random_trig_curve(seed, i as u64, dims[i % dims.len()]);
        let f0 = initial_frame(&curve, 0.0, cfg)?;
        let dr = rmf_double_reflection(&curve, &grid, &f0, cfg)?;
        let curv = per_parameter(&rm_curvatures_from_curve(&dr, cfg)?, &curve, cfg)?;
        let ode = rmf_ode(&curv, &f0, cfg)?;
        Ok((check_field(&dr), check_field(&ode)))
    });
    let mut summary = SuiteSummary {
        curves: count,
        failures: 0,
        double_reflection: FieldCheck::default(),
        ode: FieldCheck::default(),
    };
    for r in results {
        match r {
            Ok((a, b)) => {
                summary.double_reflection = summary.double_reflection.merge(a);
                summary.ode = summary.ode.merge(b);
            }
            Err(_) => summary.failures += 1,
        }
    }
    summary
}

/// Classifies each curve on its own grid.
pub fn classify_batch(
    jobs: &[(Curve, Vec<f64>)],
    strategy: Strategy,
    cfg: &ToleranceConfig,
) -> Vec<Result<ClassificationReport>> {
    map_items(jobs, strategy, |(curve, grid)| classify_curve(curve, grid, cfg))
}
