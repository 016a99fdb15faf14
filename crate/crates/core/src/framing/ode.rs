use crate::config::ToleranceConfig;
use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::numeric::{cumulative_trapezoid, interpolate_cubic};
use crate::vector::VectorN;

use super::{CurvatureField, Frame, FrameField};

/// Right-hand side of the frame system together with `x' = xi_1`:
/// `xi_1' = sum_j k_j xi_{j+1}`, `xi_{j+1}' = -k_j xi_1`.
fn rhs(k: &[f64], frame: &[VectorN]) -> Vec<VectorN> {
    let mut out = Vec::with_capacity(frame.len() + 1);
    out.push(frame[0].clone());
    let mut d0 = VectorN::zeros(frame[0].dim());
    for (j, kj) in k.iter().enumerate() {
        d0.axpy(*kj, &frame[j + 1]);
    }
    out.push(d0);
    for kj in k {
        out.push(&frame[0] * (-kj));
    }
    out
}

fn advance(state: &[VectorN], slope: &[VectorN], h: f64) -> Vec<VectorN> {
    state
        .iter()
        .zip(slope)
        .map(|(s, d)| {
            let mut v = s.clone();
            v.axpy(h, d);
            v
        })
        .collect()
}

/// Integrates the frame system for the given curvatures with classical RK4,
/// starting from `initial` at the first sample and from the origin.
///
/// Curvatures at half steps come from cubic interpolation of the samples, so
/// the scheme stays fourth order. After each step the frame is
/// re-orthonormalized. The position `x' = xi_1` is integrated alongside and
/// becomes the field's base curve; translate it if another origin is wanted.
///
/// Steps larger than `0.1 / max|k|` are refused as too coarse.
pub fn rmf_ode(curvatures: &CurvatureField, initial: &Frame, _cfg: &ToleranceConfig) -> Result<FrameField> {
    let n = curvatures.count() + 1;
    initial.check_initial(n)?;
    let params = curvatures.params();
    if params.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: params.len(),
        });
    }
    let kmax = curvatures.max_abs();
    let hmax = params.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    if kmax > 0.0 && hmax * kmax > 0.1 {
        return Err(Error::CoarseGrid {
            step: hmax,
            limit: 0.1 / kmax,
        });
    }
    let series: Vec<Vec<f64>> = (0..n - 1).map(|j| curvatures.series(j)).collect();
    let k_mid = |s: f64| -> Vec<f64> { series.iter().map(|col| interpolate_cubic(params, col, s)).collect() };

    let mut start = initial.clone();
    start.s = params[0];
    start.reorthonormalize()?;
    let mut state: Vec<VectorN> = std::iter::once(VectorN::zeros(n))
        .chain(start.vectors().iter().cloned())
        .collect();
    let mut frames = Vec::with_capacity(params.len());
    let mut positions = Vec::with_capacity(params.len());
    frames.push(start);
    positions.push(state[0].clone());

    for i in 0..params.len() - 1 {
        let h = params[i + 1] - params[i];
        let k0 = curvatures.at(i);
        let km = k_mid(params[i] + 0.5 * h);
        let k1 = curvatures.at(i + 1);
        let a = rhs(k0, &state[1..]);
        let sa = advance(&state, &a, 0.5 * h);
        let b = rhs(&km, &sa[1..]);
        let sb = advance(&state, &b, 0.5 * h);
        let c = rhs(&km, &sb[1..]);
        let sc = advance(&state, &c, h);
        let d = rhs(k1, &sc[1..]);
        for (idx, s) in state.iter_mut().enumerate() {
            s.axpy(h / 6.0, &a[idx]);
            s.axpy(h / 3.0, &b[idx]);
            s.axpy(h / 3.0, &c[idx]);
            s.axpy(h / 6.0, &d[idx]);
        }
        let mut frame = Frame::new(params[i + 1], state[1..].to_vec())?;
        frame.reorthonormalize()?;
        state[1..].clone_from_slice(frame.vectors());
        positions.push(state[0].clone());
        frames.push(frame);
    }
    let base = Curve::sampled(params.to_vec(), positions)?;
    FrameField::new(frames, base)
}

/// Space curve with prescribed curvature and torsion (per unit arclength),
/// starting at the origin with the identity frame at `grid[0]`. The
/// torsion angle is accumulated by the trapezoid rule, so it is exact for
/// torsion linear in `s`.
pub fn curve_from_curvature_torsion<K, T>(grid: &[f64], kappa: K, tau: T, cfg: &ToleranceConfig) -> Result<Curve>
where
    K: Fn(f64) -> f64,
    T: Fn(f64) -> f64,
{
    let taus: Vec<f64> = grid.iter().map(|&s| tau(s)).collect();
    let theta = cumulative_trapezoid(grid, &taus);
    let values = grid
        .iter()
        .zip(&theta)
        .map(|(&s, th)| vec![kappa(s) * th.cos(), kappa(s) * th.sin()])
        .collect();
    let field = rmf_ode(&CurvatureField::new(grid.to_vec(), values)?, &Frame::identity(3, grid[0]), cfg)?;
    Ok(field.base_curve().clone())
}
