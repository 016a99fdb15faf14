//! Text formats: sampled-curve CSV, curvature CSV, frame JSON, and JSON
//! serialization with numbers rounded to 12 significant digits so output is
//! byte-stable.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::framing::{CurvatureField, Frame};
use crate::vector::VectorN;

/// `x` rounded to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Shortest decimal that round-trips the 12-digit rounding of `x`.
pub fn fmt_f64(x: f64) -> String {
    let r = round12(x);
    let s = format!("{r}");
    // switch to exponent form for very large or small magnitudes
    if r != 0.0 && (r.abs() >= 1e15 || r.abs() < 1e-4) {
        return format!("{r:e}");
    }
    s
}

fn join(values: impl IntoIterator<Item = f64>) -> String {
    values.into_iter().map(fmt_f64).collect::<Vec<_>>().join(",")
}

/// CSV `s,x1,...,xn` with one row per parameter in `params`.
pub fn curve_csv(curve: &Curve, params: &[f64]) -> Result<String> {
    let mut out = String::from("s");
    for i in 1..=curve.dim() {
        write!(out, ",x{i}").unwrap();
    }
    out.push('\n');
    for &s in params {
        let p = curve.position(s)?;
        writeln!(out, "{},{}", fmt_f64(s), join(p.as_slice().iter().copied())).unwrap();
    }
    Ok(out)
}

/// Parses a sampled-curve CSV. `path` is only used in error messages.
pub fn parse_curve_csv(text: &str, path: &str) -> Result<Curve> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_string(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Usage(format!("{path}: no samples")))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.len() < 3 || cols[0] != "s" {
        return Err(parse_err(1, format!("expected header 's,x1,...,xn', got '{header}'")));
    }
    let dim = cols.len() - 1;
    let mut params = Vec::new();
    let mut points = Vec::new();
    for (i, line) in lines {
        let values = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| parse_err(i + 1, e.to_string()))?;
        if values.len() != dim + 1 {
            return Err(parse_err(i + 1, format!("expected {} fields, got {}", dim + 1, values.len())));
        }
        params.push(values[0]);
        points.push(VectorN::new(values[1..].to_vec()).map_err(|e| parse_err(i + 1, e.to_string()))?);
    }
    if params.is_empty() {
        return Err(Error::Usage(format!("{path}: no samples")));
    }
    Curve::sampled(params, points).map_err(|e| match e {
        Error::GridMismatch(m) | Error::InvalidVector(m) => parse_err(0, m),
        other => other,
    })
}

pub fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.display().to_string(),
            source,
        })?;
    }
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_curve_csv(path: &Path) -> Result<Curve> {
    parse_curve_csv(&read_to_string(path)?, &path.display().to_string())
}

/// CSV `s,k1,...,k{n-1}[,kappa,tau][,theta]`.
pub fn curvature_csv(field: &CurvatureField) -> String {
    let mut out = String::from("s");
    for j in 1..=field.count() {
        write!(out, ",k{j}").unwrap();
    }
    if field.frenet.is_some() {
        out.push_str(",kappa,tau");
    }
    if field.theta.is_some() {
        out.push_str(",theta");
    }
    out.push('\n');
    for i in 0..field.len() {
        out.push_str(&fmt_f64(field.params()[i]));
        for k in field.at(i) {
            write!(out, ",{}", fmt_f64(*k)).unwrap();
        }
        if let Some(f) = &field.frenet {
            write!(out, ",{},{}", fmt_f64(f[i].kappa), fmt_f64(f[i].tau)).unwrap();
        }
        if let Some(t) = &field.theta {
            write!(out, ",{}", fmt_f64(t[i])).unwrap();
        }
        out.push('\n');
    }
    out
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if !n.is_i64() && !n.is_u64() => serde_json::Number::from_f64(round12(x))
                .map(Value::Number)
                .unwrap_or(Value::Null),
            _ => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

/// Pretty JSON with every float rounded to 12 significant digits.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let mut s = serde_json::to_string_pretty(&round_value(v)).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct FrameRecord<'a> {
    s: f64,
    xi: Vec<&'a [f64]>,
}

/// `[{"s": .., "xi": [[..], ..]}, ..]`, one row per frame vector.
pub fn frames_json(frames: &[Frame]) -> Result<String> {
    let records: Vec<FrameRecord> = frames
        .iter()
        .map(|f| FrameRecord {
            s: f.s,
            xi: f.vectors().iter().map(|v| v.as_slice()).collect(),
        })
        .collect();
    to_json(&records)
}

/// CSV `s,xi1_1,...,xi1_n,xi2_1,...`: each frame flattened row by row.
pub fn frames_csv(frames: &[Frame]) -> String {
    let n = frames.first().map_or(0, |f| f.dim());
    let mut out = String::from("s");
    for j in 1..=n {
        for i in 1..=n {
            write!(out, ",xi{j}_{i}").unwrap();
        }
    }
    out.push('\n');
    for f in frames {
        out.push_str(&fmt_f64(f.s));
        for v in f.vectors() {
            for x in v.as_slice() {
                write!(out, ",{}", fmt_f64(*x)).unwrap();
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::numeric::linspace;

    #[test]
    fn twelve_digit_formatting() {
        assert_eq!(fmt_f64(24.0 / 625.0), "0.0384");
        assert_eq!(fmt_f64(7.0 / 24.0), "0.291666666667");
        assert_eq!(fmt_f64(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_f64(-0.0), "0");
        assert_eq!(fmt_f64(120.0), "120");
        assert_eq!(fmt_f64(0.1 + 0.2), "0.3");
        assert_eq!(fmt_f64(1.5e-9), "1.5e-9");
        assert_eq!(fmt_f64(625.0 * std::f64::consts::PI / 14.0), "140.249672035");
    }

    #[test]
    fn csv_round_trip() {
        let c = builtin::helix();
        let grid = linspace(0.0, 10.0, 11);
        let text = curve_csv(&c, &grid).unwrap();
        assert!(text.starts_with("s,x1,x2,x3\n0,24,0,0\n"));
        let back = parse_curve_csv(&text, "mem").unwrap();
        assert!(back.position(5.0).unwrap().distance(&c.position(5.0).unwrap()) < 1e-9);
    }

    #[test]
    fn csv_errors() {
        assert!(matches!(parse_curve_csv("", "a.csv"), Err(Error::Usage(m)) if m.contains("no samples")));
        assert!(matches!(parse_curve_csv("s,x1,x2\n", "a.csv"), Err(Error::Usage(_))));
        match parse_curve_csv("s,x1,x2\n0,1,2\n1,oops,3\n", "a.csv") {
            Err(Error::Parse { line, path, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(path, "a.csv");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_curve_csv("t,x\n", "a.csv"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_curve_csv("s,x1,x2\n1,0,0\n0,1,1\n", "a.csv"), Err(Error::Parse { .. })));
    }

    #[test]
    fn frame_formats() {
        let f = vec![Frame::identity(2, 0.5)];
        assert_eq!(frames_csv(&f), "s,xi1_1,xi1_2,xi2_1,xi2_2\n0.5,1,0,0,1\n");
        let j = frames_json(&f).unwrap();
        let v: serde_json::Value = serde_json::from_str(&j).unwrap();
        assert_eq!(v[0]["xi"][1][1], 1.0);
    }

    #[test]
    fn json_rounding() {
        let s = to_json(&vec![1.0 / 3.0, 2.0]).unwrap();
        assert_eq!(s, "[\n  0.333333333333,\n  2.0\n]\n");
    }
}
