use std::fmt::Write as _;

use rmf_core::io::fmt_f64;
use rmf_core::{Curve, Error, Result};

/// Coordinate pair selected by `xy`, `xz` or `yz` (0-based).
pub fn projection_axes(name: &str, dim: usize) -> Result<(usize, usize)> {
    let axes = match name {
        "xy" => (0, 1),
        "xz" => (0, 2),
        "yz" => (1, 2),
        other => return Err(Error::Usage(format!("unknown projection '{other}' (expected xy, xz or yz)"))),
    };
    if axes.1 >= dim {
        return Err(Error::Usage(format!("projection '{name}' needs at least 3 coordinates, curve has {dim}")));
    }
    Ok(axes)
}

/// One polyline of the orthographic projection of `curve` at `params`, in a
/// viewBox fitted to the points with a 5% margin. The vertical axis is
/// flipped so the picture has the usual orientation.
pub fn curve_svg(curve: &Curve, params: &[f64], axes: (usize, usize)) -> Result<String> {
    let mut pts = Vec::with_capacity(params.len());
    for &s in params {
        let p = curve.position(s)?;
        pts.push((p[axes.0], -p[axes.1]));
    }
    if pts.is_empty() {
        return Err(Error::Usage("no samples".into()));
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0);
    let pad = if span > 0.0 { 0.05 * span } else { 1.0 };
    let (vx, vy, vw, vh) = (x0 - pad, y0 - pad, x1 - x0 + 2.0 * pad, y1 - y0 + 2.0 * pad);

    let mut points = String::new();
    for (i, (x, y)) in pts.iter().enumerate() {
        if i > 0 {
            points.push(' ');
        }
        write!(points, "{},{}", fmt_f64(*x), fmt_f64(*y)).unwrap();
    }
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\" width=\"600\" height=\"600\">",
        fmt_f64(vx),
        fmt_f64(vy),
        fmt_f64(vw),
        fmt_f64(vh)
    )
    .unwrap();
    writeln!(
        out,
        "  <polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" vector-effect=\"non-scaling-stroke\" points=\"{points}\"/>"
    )
    .unwrap();
    out.push_str("</svg>\n");
    Ok(out)
}
