//! Moving frames along curves: Frenet frames, rotation-minimizing frames by
//! double reflection and by integrating the skew frame system, and the
//! curvatures that drive them.

mod curvature;
mod double_reflection;
mod frenet;
mod ode;

pub use curvature::{per_parameter, rm_curvatures, rm_curvatures_from_curve};
pub use double_reflection::rmf_double_reflection;
pub use frenet::{bishop_curvatures, frenet_as_rmf, frenet_curvatures, frenet_frame};
pub use ode::{curve_from_curvature_torsion, rmf_ode};

use serde::{Deserialize, Serialize};

use crate::config::ToleranceConfig;
use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::numeric::{determinant, orthonormality_error, orthonormalize};
use crate::vector::VectorN;

/// An orthonormal frame `{xi_1, ..., xi_n}` at parameter `s`; `xi_1` is the
/// tangent direction.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub s: f64,
    vectors: Vec<VectorN>,
}

impl Frame {
    /// Checks shape only; orthonormality is reported by
    /// [`Frame::orthonormality_error`].
    pub fn new(s: f64, vectors: Vec<VectorN>) -> Result<Self> {
        let n = vectors.len();
        if n < 2 {
            return Err(Error::InvalidFrame(format!("need at least 2 vectors, got {n}")));
        }
        if let Some(v) = vectors.iter().find(|v| v.dim() != n) {
            return Err(Error::DimensionMismatch {
                left: n,
                right: v.dim(),
            });
        }
        Ok(Self { s, vectors })
    }

    pub fn identity(dim: usize, s: f64) -> Self {
        Self {
            s,
            vectors: (0..dim).map(|i| VectorN::basis(dim, i)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[VectorN] {
        &self.vectors
    }

    pub fn into_vectors(self) -> Vec<VectorN> {
        self.vectors
    }

    pub fn tangent(&self) -> &VectorN {
        &self.vectors[0]
    }

    /// `xi_2, ..., xi_n`
    pub fn normals(&self) -> &[VectorN] {
        &self.vectors[1..]
    }

    pub fn orthonormality_error(&self) -> f64 {
        orthonormality_error(&self.vectors)
    }

    pub fn determinant(&self) -> f64 {
        determinant(&self.vectors)
    }

    /// Re-orthonormalizes with `xi_1` held fixed in direction.
    pub(crate) fn reorthonormalize(&mut self) -> Result<()> {
        if !orthonormalize(&mut self.vectors) {
            return Err(Error::InvalidFrame(format!("frame collapsed at s = {}", self.s)));
        }
        Ok(())
    }

    fn check_initial(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: self.dim(),
            });
        }
        let err = self.orthonormality_error();
        if err > 1e-6 {
            return Err(Error::InvalidFrame(format!(
                "initial frame is not orthonormal (error {err:e})"
            )));
        }
        Ok(())
    }
}

/// Frames at strictly increasing parameters along `base_curve`.
#[derive(Debug, Clone)]
pub struct FrameField {
    frames: Vec<Frame>,
    base_curve: Curve,
}

impl FrameField {
    pub fn new(frames: Vec<Frame>, base_curve: Curve) -> Result<Self> {
        if frames.is_empty() {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        let n = frames[0].dim();
        if n != base_curve.dim() {
            return Err(Error::DimensionMismatch {
                left: n,
                right: base_curve.dim(),
            });
        }
        if frames.iter().any(|f| f.dim() != n) {
            return Err(Error::InvalidFrame("frames of mixed dimension".into()));
        }
        if frames.windows(2).any(|w| w[1].s <= w[0].s) {
            return Err(Error::GridMismatch("frame parameters must be strictly increasing".into()));
        }
        Ok(Self { frames, base_curve })
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn base_curve(&self) -> &Curve {
        &self.base_curve
    }

    pub fn dim(&self) -> usize {
        self.frames[0].dim()
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn params(&self) -> Vec<f64> {
        self.frames.iter().map(|f| f.s).collect()
    }

    /// The series of `xi_{j+1}` (0-based `j`) over the field.
    pub fn vector_series(&self, j: usize) -> Vec<VectorN> {
        self.frames.iter().map(|f| f.vectors[j].clone()).collect()
    }

    pub fn max_orthonormality_error(&self) -> f64 {
        self.frames.iter().map(Frame::orthonormality_error).fold(0.0, f64::max)
    }

    /// Frames with `a <= s <= b`, same base curve.
    pub fn restrict(&self, a: f64, b: f64) -> Result<FrameField> {
        let frames: Vec<Frame> = self.frames.iter().filter(|f| f.s >= a && f.s <= b).cloned().collect();
        FrameField::new(frames, self.base_curve.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrenetPair {
    pub kappa: f64,
    pub tau: f64,
}

/// RM curvatures `k_1 .. k_{n-1}` per sample, with optional Frenet data.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureField {
    params: Vec<f64>,
    values: Vec<Vec<f64>>,
    pub frenet: Option<Vec<FrenetPair>>,
    /// Accumulated torsion angle `theta(s)`.
    pub theta: Option<Vec<f64>>,
    /// `|xi_1' - sum_j k_j xi_{j+1}|` per sample, when computed from a frame field.
    pub residuals: Option<Vec<f64>>,
}

impl CurvatureField {
    pub fn new(params: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        if params.len() != values.len() {
            return Err(Error::GridMismatch(format!(
                "{} parameters for {} curvature samples",
                params.len(),
                values.len()
            )));
        }
        if params.is_empty() {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        let m = values[0].len();
        if m == 0 || values.iter().any(|v| v.len() != m) {
            return Err(Error::GridMismatch("curvature samples must share a positive count".into()));
        }
        if values.iter().flatten().any(|k| !k.is_finite()) {
            return Err(Error::InvalidVector("non-finite curvature".into()));
        }
        if params.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::GridMismatch("curvature parameters must be strictly increasing".into()));
        }
        Ok(Self {
            params,
            values,
            frenet: None,
            theta: None,
            residuals: None,
        })
    }

    /// Samples `f(s) -> [k_1, ..., k_{n-1}]` on `grid`.
    pub fn from_fn<F: Fn(f64) -> Vec<f64>>(grid: &[f64], f: F) -> Result<Self> {
        Self::new(grid.to_vec(), grid.iter().map(|&s| f(s)).collect())
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    /// Number of curvatures per sample (`n - 1`).
    pub fn count(&self) -> usize {
        self.values[0].len()
    }

    pub fn at(&self, i: usize) -> &[f64] {
        &self.values[i]
    }

    /// Series of `k_{j+1}` (0-based `j`).
    pub fn series(&self, j: usize) -> Vec<f64> {
        self.values.iter().map(|v| v[j]).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().flatten().fold(0.0, |m, k| m.max(k.abs()))
    }

    /// Samples with `a <= s <= b`, keeping the optional columns aligned.
    pub fn restrict(&self, a: f64, b: f64) -> Result<CurvatureField> {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| self.params[i] >= a && self.params[i] <= b).collect();
        let pick = |v: &Vec<f64>| keep.iter().map(|&i| v[i]).collect::<Vec<_>>();
        let mut out = CurvatureField::new(
            keep.iter().map(|&i| self.params[i]).collect(),
            keep.iter().map(|&i| self.values[i].clone()).collect(),
        )?;
        out.frenet = self.frenet.as_ref().map(|f| keep.iter().map(|&i| f[i]).collect());
        out.theta = self.theta.as_ref().map(pick);
        out.residuals = self.residuals.as_ref().map(pick);
        Ok(out)
    }
}

/// Deterministic starting frame: `xi_1` is the unit tangent at `s0`; the
/// normals come from Gram-Schmidt on the ambient basis, starting with the
/// basis vector least parallel to the tangent. The last vector is flipped
/// if needed so the determinant is +1.
pub fn initial_frame(curve: &Curve, s0: f64, cfg: &ToleranceConfig) -> Result<Frame> {
    let t = curve.unit_tangent(s0, cfg)?;
    frame_from_tangent(&t, s0)
}

pub(crate) fn frame_from_tangent(t: &VectorN, s: f64) -> Result<Frame> {
    let n = t.dim();
    let first = (0..n)
        .min_by(|&a, &b| t[a].abs().total_cmp(&t[b].abs()))
        .unwrap();
    let order = std::iter::once(first).chain((0..n).filter(|&k| k != first));
    let mut vectors = vec![t.clone()];
    for k in order {
        if vectors.len() == n {
            break;
        }
        let mut e = VectorN::basis(n, k);
        for _ in 0..2 {
            for v in &vectors {
                let p = e.dot(v);
                e.axpy(-p, v);
            }
        }
        if e.norm() > 1e-6 {
            vectors.push(e.normalized().unwrap());
        }
    }
    if vectors.len() != n {
        return Err(Error::InvalidFrame("could not complete frame".into()));
    }
    if determinant(&vectors) < 0.0 {
        let last = vectors.pop().unwrap();
        vectors.push(-last);
    }
    Frame::new(s, vectors)
}

/// Unit vector completing `vectors` (n-1 orthonormal vectors in R^n) to a
/// positively oriented orthonormal basis.
pub(crate) fn complete_orientation(vectors: &[VectorN]) -> VectorN {
    let n = vectors[0].dim();
    let mut best: Option<VectorN> = None;
    for k in 0..n {
        let mut e = VectorN::basis(n, k);
        for _ in 0..2 {
            for v in vectors {
                let p = e.dot(v);
                e.axpy(-p, v);
            }
        }
        if best.as_ref().map_or(true, |b| e.norm() > b.norm()) {
            best = Some(e);
        }
    }
    let w = best.unwrap().normalized().expect("independent vectors");
    let mut all = vectors.to_vec();
    all.push(w.clone());
    if determinant(&all) < 0.0 {
        -w
    } else {
        w
    }
}

pub(crate) fn check_grid(grid: &[f64], needed: usize) -> Result<()> {
    if grid.len() < needed {
        return Err(Error::InsufficientData {
            needed,
            got: grid.len(),
        });
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::GridMismatch("grid must be strictly increasing".into()));
    }
    Ok(())
}
