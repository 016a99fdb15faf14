//! Small numerical kernels shared across modules: finite-difference weights
//! on arbitrary nodes, derivatives of sampled sequences, quadrature, and a
//! few dense linear-algebra helpers.

use crate::vector::VectorN;

/// Finite-difference weights (Fornberg) for the `order`-th derivative at `x0`
/// from values at `nodes`.
pub fn fd_weights(x0: f64, nodes: &[f64], order: usize) -> Vec<f64> {
    let n = nodes.len();
    assert!(n > order, "need more nodes than the derivative order");
    // c[i][k]: weight of node i for derivative k
    let mut c = vec![vec![0.0; order + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// Index window used to differentiate sample `i` of `len` samples:
/// centered when possible, one-sided at the ends. Second-order accurate.
pub(crate) fn stencil_window(i: usize, len: usize, order: usize) -> std::ops::Range<usize> {
    window(i, len, order, 2)
}

/// Fourth-order accurate variant, for sampled curves whose spacing is
/// fixed by the data rather than chosen to balance truncation.
pub(crate) fn wide_stencil_window(i: usize, len: usize, order: usize) -> std::ops::Range<usize> {
    window(i, len, order, 4)
}

fn window(i: usize, len: usize, order: usize, accuracy: usize) -> std::ops::Range<usize> {
    // centered windows need an odd node count
    let centered = if order % 2 == 1 { order + accuracy } else { order + accuracy + 1 };
    let one_sided = order + accuracy;
    let half = centered / 2;
    if i >= half && i + half < len {
        return (i - half)..(i + half + 1);
    }
    let width = one_sided.min(len);
    if i < half {
        0..width
    } else {
        (len - width)..len
    }
}

/// `order`-th derivative of a sampled vector sequence at every node.
pub fn derivative_along(params: &[f64], values: &[VectorN], order: usize) -> Vec<VectorN> {
    assert_eq!(params.len(), values.len());
    let len = params.len();
    (0..len)
        .map(|i| {
            let win = stencil_window(i, len, order);
            let w = fd_weights(params[i], &params[win.clone()], order);
            VectorN::combination(&w, &values[win])
        })
        .collect()
}

/// Scalar analogue of [`derivative_along`].
pub fn derivative_along_scalar(params: &[f64], values: &[f64], order: usize) -> Vec<f64> {
    assert_eq!(params.len(), values.len());
    let len = params.len();
    (0..len)
        .map(|i| {
            let win = stencil_window(i, len, order);
            let w = fd_weights(params[i], &params[win.clone()], order);
            w.iter().zip(&values[win]).map(|(a, b)| a * b).sum()
        })
        .collect()
}

/// Cumulative composite trapezoid integral, starting at zero.
pub fn cumulative_trapezoid(params: &[f64], values: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(params.len());
    let mut acc = 0.0;
    out.push(0.0);
    for i in 1..params.len() {
        acc += 0.5 * (values[i] + values[i - 1]) * (params[i] - params[i - 1]);
        out.push(acc);
    }
    out
}

/// Least-squares line `y = slope * x + intercept`; returns (slope, intercept).
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return (0.0, my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

pub fn std_dev(values: &[f64]) -> f64 {
    let m = mean(values);
    (values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / values.len() as f64).sqrt()
}

/// Determinant of the matrix whose rows are `rows`, by Gaussian elimination
/// with partial pivoting.
pub fn determinant(rows: &[VectorN]) -> f64 {
    let n = rows.len();
    let mut a: Vec<Vec<f64>> = rows.iter().map(|r| r.as_slice().to_vec()).collect();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for r in (col + 1)..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    det
}

/// Modified Gram-Schmidt in place, applied twice for stability.
/// The first vector keeps its direction; returns false if any vector
/// collapses to (numerically) zero.
pub fn orthonormalize(vectors: &mut [VectorN]) -> bool {
    for _ in 0..2 {
        for i in 0..vectors.len() {
            for j in 0..i {
                let p = vectors[i].dot(&vectors[j]);
                let vj = vectors[j].clone();
                vectors[i].axpy(-p, &vj);
            }
            match vectors[i].normalized() {
                Some(u) => vectors[i] = u,
                None => return false,
            }
        }
    }
    true
}

/// max_{i,j} |<v_i, v_j> - delta_ij|
pub fn orthonormality_error(vectors: &[VectorN]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..vectors.len() {
        for j in i..vectors.len() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((vectors[i].dot(&vectors[j]) - target).abs());
        }
    }
    worst
}

/// Angle between two vectors, accurate for nearly parallel inputs.
pub fn angle_between(a: &VectorN, b: &VectorN) -> f64 {
    let (na, nb) = (a.norm(), b.norm());
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    let d = (&(a * (1.0 / na)) - &(b * (1.0 / nb))).norm();
    2.0 * (0.5 * d).min(1.0).asin()
}

/// Lagrange interpolation of scalar samples at `x` using up to four nodes
/// around it. Exact for cubics.
pub fn interpolate_cubic(params: &[f64], values: &[f64], x: f64) -> f64 {
    let len = params.len();
    if len == 1 {
        return values[0];
    }
    let hi = params.partition_point(|&p| p < x).clamp(1, len - 1);
    let start = hi.saturating_sub(2).min(len.saturating_sub(4));
    let end = (start + 4).min(len);
    let w = fd_weights(x, &params[start..end], 0);
    w.iter().zip(&values[start..end]).map(|(a, b)| a * b).sum()
}

/// Zeros of a sampled scalar: samples with |v| <= guard plus linearly
/// interpolated sign changes between consecutive samples.
pub fn zero_crossings(params: &[f64], values: &[f64], guard: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 0..values.len() {
        if values[i].abs() <= guard {
            out.push(params[i]);
            continue;
        }
        if i + 1 < values.len() && values[i + 1].abs() > guard && values[i].signum() != values[i + 1].signum() {
            let t = values[i] / (values[i] - values[i + 1]);
            out.push(params[i] + t * (params[i + 1] - params[i]));
        }
    }
    out
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    let step = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { b } else { a + step * i as f64 })
        .collect()
}
