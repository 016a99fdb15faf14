//! Parametric curves in R^n: analytic evaluators or ordered samples.

use std::fmt;
use std::sync::Arc;

use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::numeric::{cumulative_trapezoid, fd_weights, wide_stencil_window};
use crate::vector::VectorN;

/// Maps a parameter to a point (or derivative) in R^dim.
pub type Evaluator = Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

#[derive(Clone)]
pub enum CurveKind {
    Analytic {
        position: Evaluator,
        /// Exact derivatives of order 1, 2, 3 when known.
        derivatives: [Option<Evaluator>; 3],
    },
    Sampled {
        params: Vec<f64>,
        points: Vec<VectorN>,
    },
}

#[derive(Clone)]
pub struct Curve {
    dim: usize,
    domain: (f64, f64),
    kind: CurveKind,
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.kind {
            CurveKind::Analytic { derivatives, .. } => format!(
                "Analytic(exact derivatives: {:?})",
                derivatives.iter().map(Option::is_some).collect::<Vec<_>>()
            ),
            CurveKind::Sampled { params, .. } => format!("Sampled({} points)", params.len()),
        };
        f.debug_struct("Curve")
            .field("dim", &self.dim)
            .field("domain", &self.domain)
            .field("kind", &kind)
            .finish()
    }
}

impl Curve {
    pub fn analytic<F>(dim: usize, domain: (f64, f64), position: F) -> Result<Self>
    where
        F: Fn(f64) -> Vec<f64> + Send + Sync + 'static,
    {
        if dim < 2 {
            return Err(Error::InvalidVector(format!("curve dimension must be >= 2, got {dim}")));
        }
        if !(domain.0 < domain.1) || !domain.0.is_finite() || !domain.1.is_finite() {
            return Err(Error::Usage(format!(
                "curve domain must satisfy s_min < s_max, got [{}, {}]",
                domain.0, domain.1
            )));
        }
        Ok(Self {
            dim,
            domain,
            kind: CurveKind::Analytic {
                position: Arc::new(position),
                derivatives: [None, None, None],
            },
        })
    }

    /// Attaches an exact derivative evaluator of the given order (1..=3).
    pub fn with_derivative<F>(mut self, order: usize, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Vec<f64> + Send + Sync + 'static,
    {
        if !(1..=3).contains(&order) {
            return Err(Error::UnsupportedOrder(order));
        }
        match &mut self.kind {
            CurveKind::Analytic { derivatives, .. } => derivatives[order - 1] = Some(Arc::new(f)),
            CurveKind::Sampled { .. } => {
                return Err(Error::Usage("sampled curves carry no derivative evaluators".into()))
            }
        }
        Ok(self)
    }

    /// The same analytic curve with its exact derivative evaluators
    /// dropped, so every derivative falls back to finite differences.
    /// Sampled curves are returned unchanged.
    pub fn without_derivatives(&self) -> Curve {
        let mut out = self.clone();
        if let CurveKind::Analytic { derivatives, .. } = &mut out.kind {
            *derivatives = [None, None, None];
        }
        out
    }

    pub fn sampled(params: Vec<f64>, points: Vec<VectorN>) -> Result<Self> {
        if params.len() != points.len() {
            return Err(Error::GridMismatch(format!(
                "{} parameters for {} points",
                params.len(),
                points.len()
            )));
        }
        if params.len() < 2 {
            return Err(Error::InsufficientData {
                needed: 2,
                got: params.len(),
            });
        }
        let dim = points[0].dim();
        for (i, p) in points.iter().enumerate() {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: p.dim(),
                });
            }
            if !p.is_finite() || !params[i].is_finite() {
                return Err(Error::InvalidVector(format!("sample {i} is not finite")));
            }
        }
        if let Some(i) = params.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::GridMismatch(format!(
                "parameters must be strictly increasing (sample {})",
                i + 1
            )));
        }
        let domain = (params[0], *params.last().unwrap());
        Ok(Self {
            dim,
            domain,
            kind: CurveKind::Sampled { params, points },
        })
    }

    /// Samples `self` at `grid` into a sampled curve.
    pub fn sample(&self, grid: &[f64]) -> Result<Curve> {
        let points = grid.iter().map(|&s| self.position(s)).collect::<Result<Vec<_>>>()?;
        Curve::sampled(grid.to_vec(), points)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn kind(&self) -> &CurveKind {
        &self.kind
    }

    pub fn is_sampled(&self) -> bool {
        matches!(self.kind, CurveKind::Sampled { .. })
    }

    pub fn has_exact_derivative(&self, order: usize) -> bool {
        match &self.kind {
            CurveKind::Analytic { derivatives, .. } => {
                (1..=3).contains(&order) && derivatives[order - 1].is_some()
            }
            CurveKind::Sampled { .. } => false,
        }
    }

    /// Sample parameters for sampled curves.
    pub fn sample_parameters(&self) -> Option<&[f64]> {
        match &self.kind {
            CurveKind::Sampled { params, .. } => Some(params),
            CurveKind::Analytic { .. } => None,
        }
    }

    /// The natural evaluation grid: the samples of a sampled curve, or `n`
    /// uniformly spaced parameters over the domain of an analytic one.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        match &self.kind {
            CurveKind::Sampled { params, .. } => params.clone(),
            CurveKind::Analytic { .. } => crate::numeric::linspace(self.domain.0, self.domain.1, n.max(2)),
        }
    }

    fn slack(&self) -> f64 {
        1e-12 * (self.domain.1 - self.domain.0).max(1.0)
    }

    fn check_in_domain(&self, s: f64) -> Result<()> {
        let eps = self.slack();
        if !(s >= self.domain.0 - eps && s <= self.domain.1 + eps) {
            return Err(Error::Domain {
                s,
                min: self.domain.0,
                max: self.domain.1,
            });
        }
        Ok(())
    }

    fn eval(&self, f: &Evaluator, s: f64) -> Result<VectorN> {
        let v = f(s);
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: v.len(),
            });
        }
        VectorN::new(v)
    }

    pub fn position(&self, s: f64) -> Result<VectorN> {
        self.check_in_domain(s)?;
        match &self.kind {
            CurveKind::Analytic { position, .. } => self.eval(position, s),
            CurveKind::Sampled { params, points } => {
                let (i, t) = locate(params, s);
                if t == 0.0 {
                    return Ok(points[i].clone());
                }
                Ok(&(&points[i] * (1.0 - t)) + &(&points[i + 1] * t))
            }
        }
    }

    /// Derivative that never leaves the domain: central stencils in the
    /// interior, one-sided second-order stencils near the ends.
    pub fn derivative_with_edges(&self, s: f64, order: usize, cfg: &ToleranceConfig) -> Result<VectorN> {
        self.derivative_impl(s, order, cfg, true)
    }

    fn derivative_impl(&self, s: f64, order: usize, cfg: &ToleranceConfig, edges: bool) -> Result<VectorN> {
        if !(1..=3).contains(&order) {
            return Err(Error::UnsupportedOrder(order));
        }
        self.check_in_domain(s)?;
        match &self.kind {
            CurveKind::Analytic {
                position,
                derivatives,
            } => {
                if let Some(d) = &derivatives[order - 1] {
                    return self.eval(d, s);
                }
                let h = cfg.step_for(order);
                let half = if order == 3 { 2.0 } else { 1.0 };
                let (lo, hi) = self.domain;
                let nodes: Vec<f64> = if s - half * h >= lo && s + half * h <= hi {
                    if order == 3 {
                        vec![s - 2.0 * h, s - h, s, s + h, s + 2.0 * h]
                    } else {
                        vec![s - h, s, s + h]
                    }
                } else if !edges {
                    let shrink = order as f64 * h;
                    return Err(Error::Domain {
                        s,
                        min: lo + shrink,
                        max: hi - shrink,
                    });
                } else {
                    let count = order + 2;
                    let span = (count - 1) as f64 * h;
                    if s + span <= hi {
                        (0..count).map(|k| s + k as f64 * h).collect()
                    } else if s - span >= lo {
                        (0..count).map(|k| s - k as f64 * h).collect()
                    } else {
                        return Err(Error::Domain { s, min: lo, max: hi });
                    }
                };
                let w = fd_weights(s, &nodes, order);
                let values = nodes
                    .iter()
                    .map(|&x| self.eval(position, x))
                    .collect::<Result<Vec<_>>>()?;
                Ok(VectorN::combination(&w, &values))
            }
            CurveKind::Sampled { params, points } => {
                if params.len() < order + 2 {
                    return Err(Error::InsufficientData {
                        needed: order + 2,
                        got: params.len(),
                    });
                }
                let (i, t) = locate(params, s);
                let at = |k: usize| {
                    let win = wide_stencil_window(k, params.len(), order);
                    let w = fd_weights(params[k], &params[win.clone()], order);
                    VectorN::combination(&w, &points[win])
                };
                if t == 0.0 {
                    return Ok(at(i));
                }
                Ok(&(&at(i) * (1.0 - t)) + &(&at(i + 1) * t))
            }
        }
    }

    /// Unit tangent at `s`; errors where the speed falls below the guard.
    pub fn unit_tangent(&self, s: f64, cfg: &ToleranceConfig) -> Result<VectorN> {
        let d = self.derivative_with_edges(s, 1, cfg)?;
        let speed = d.norm();
        if speed <= cfg.singular_guard {
            return Err(Error::SingularCurve { s });
        }
        Ok(d * (1.0 / speed))
    }

    pub fn speed(&self, s: f64, cfg: &ToleranceConfig) -> Result<f64> {
        Ok(self.derivative_with_edges(s, 1, cfg)?.norm())
    }

    /// Image under `x -> R x + t`, with `rotation` given as rows.
    pub fn transformed(&self, rotation: &[Vec<f64>], translation: &[f64]) -> Result<Curve> {
        let n = self.dim;
        if rotation.len() != n || rotation.iter().any(|r| r.len() != n) || translation.len() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: rotation.len(),
            });
        }
        let rot: Arc<Vec<Vec<f64>>> = Arc::new(rotation.to_vec());
        let apply = {
            let rot = rot.clone();
            move |v: &[f64], shift: Option<&[f64]>| -> Vec<f64> {
                rot.iter()
                    .enumerate()
                    .map(|(i, row)| {
                        row.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() + shift.map_or(0.0, |t| t[i])
                    })
                    .collect()
            }
        };
        match &self.kind {
            CurveKind::Analytic {
                position,
                derivatives,
            } => {
                let t: Arc<Vec<f64>> = Arc::new(translation.to_vec());
                let p = position.clone();
                let ap = apply.clone();
                let tt = t.clone();
                let new_pos: Evaluator = Arc::new(move |s| ap(&p(s), Some(&tt)));
                let mut new_der: [Option<Evaluator>; 3] = [None, None, None];
                for (k, d) in derivatives.iter().enumerate() {
                    if let Some(d) = d {
                        let d = d.clone();
                        let ap = apply.clone();
                        new_der[k] = Some(Arc::new(move |s| ap(&d(s), None)));
                    }
                }
                Ok(Curve {
                    dim: n,
                    domain: self.domain,
                    kind: CurveKind::Analytic {
                        position: new_pos,
                        derivatives: new_der,
                    },
                })
            }
            CurveKind::Sampled { params, points } => {
                let pts = points
                    .iter()
                    .map(|p| VectorN::from_vec(apply(p.as_slice(), Some(translation))))
                    .collect();
                Curve::sampled(params.clone(), pts)
            }
        }
    }
}

/// Segment index and fractional position of `s` among sorted `params`;
/// `t == 0` means `s` sits on node `i`.
fn locate(params: &[f64], s: f64) -> (usize, f64) {
    let last = params.len() - 1;
    let tol = 1e-12 * (params[last] - params[0]).abs().max(1.0);
    let hi = params.partition_point(|&p| p < s);
    if hi <= last && (params[hi] - s).abs() <= tol {
        return (hi, 0.0);
    }
    if hi > 0 && (s - params[hi - 1]).abs() <= tol {
        return (hi - 1, 0.0);
    }
    if hi == 0 {
        return (0, 0.0);
    }
    if hi > last {
        return (last, 0.0);
    }
    let i = hi - 1;
    (i, (s - params[i]) / (params[i + 1] - params[i]))
}

/// Derivative of `order` (1..=3) at `s`.
///
/// Exact evaluators are used when the curve supplies them. Otherwise analytic
/// curves use central differences with the configured step and require
/// `s` to lie at least `order * step` inside the domain; sampled curves use
/// fourth-order stencils on the (possibly non-uniform) samples.
pub fn derivative(curve: &Curve, s: f64, order: usize, cfg: &ToleranceConfig) -> Result<VectorN> {
    curve.derivative_impl(s, order, cfg, false)
}

/// Resamples `curve` at `n_samples` points uniformly spaced in arclength.
///
/// Arclength comes from the composite trapezoid rule over a probe grid of
/// `4 * n_samples` parameters; the inverse map is linear between probes.
/// The returned curve is parameterized by arclength starting at 0.
pub fn arclength_reparam(curve: &Curve, n_samples: usize, cfg: &ToleranceConfig) -> Result<Curve> {
    if n_samples < 4 {
        return Err(Error::InsufficientData {
            needed: 4,
            got: n_samples,
        });
    }
    let (a, b) = curve.domain();
    let probes = crate::numeric::linspace(a, b, 4 * n_samples);
    let mut speeds = Vec::with_capacity(probes.len());
    for &t in &probes {
        let v = curve.speed(t, cfg)?;
        if v <= cfg.singular_guard {
            return Err(Error::SingularCurve { s: t });
        }
        speeds.push(v);
    }
    let lengths = cumulative_trapezoid(&probes, &speeds);
    let total = *lengths.last().unwrap();
    let targets = crate::numeric::linspace(0.0, total, n_samples);
    let mut points = Vec::with_capacity(n_samples);
    let mut seg = 0;
    for &sigma in &targets {
        while seg + 2 < lengths.len() && lengths[seg + 1] < sigma {
            seg += 1;
        }
        let (l0, l1) = (lengths[seg], lengths[seg + 1]);
        let frac = if l1 > l0 { ((sigma - l0) / (l1 - l0)).clamp(0.0, 1.0) } else { 0.0 };
        let t = probes[seg] + frac * (probes[seg + 1] - probes[seg]);
        points.push(curve.position(t.clamp(a, b))?);
    }
    Curve::sampled(targets, points)
}
