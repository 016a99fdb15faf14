//! Yes / no / indeterminate decisions with the residual behind each one.

mod classes;

pub use classes::{
    is_bertrand, is_helix, is_rectifying_chen, is_rectifying_position, is_rectifying_type_myller, is_spherical,
    myller_inputs_from_frenet, MyllerInputs,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::ToleranceConfig;
use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::framing::{bishop_curvatures, initial_frame, rm_curvatures_from_curve, rmf_double_reflection};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Indeterminate,
}

impl Verdict {
    /// `yes` below `tol`, `indeterminate` below `1e3 * tol`, otherwise `no`.
    pub fn from_residual(residual: f64, tol: f64) -> Verdict {
        if residual < tol {
            Verdict::Yes
        } else if residual < 1e3 * tol {
            Verdict::Indeterminate
        } else {
            Verdict::No
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub verdict: Verdict,
    pub residual: f64,
    pub params: Vec<f64>,
    pub degenerate: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ReportEntry {
    pub fn new(residual: f64, params: Vec<f64>, cfg: &ToleranceConfig) -> Self {
        Self {
            verdict: Verdict::from_residual(residual, cfg.residual_tol),
            residual,
            params,
            degenerate: false,
            note: None,
        }
    }

    pub fn degenerate(mut self, note: impl Into<String>) -> Self {
        self.degenerate = true;
        self.note = Some(note.into());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// A classifier that could not run; always a `no`.
    pub fn failed(err: &Error, cfg: &ToleranceConfig) -> Self {
        let residual = (1e3 * cfg.residual_tol).max(1.0);
        Self {
            verdict: Verdict::No,
            residual,
            params: Vec::new(),
            degenerate: true,
            note: Some(err.to_string()),
        }
    }
}

/// Class name to entry; serializes as a JSON object with sorted keys.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassificationReport {
    pub entries: BTreeMap<String, ReportEntry>,
}

impl ClassificationReport {
    pub fn insert(&mut self, class: &str, entry: ReportEntry) {
        self.entries.insert(class.to_string(), entry);
    }

    pub fn get(&self, class: &str) -> Option<&ReportEntry> {
        self.entries.get(class)
    }

    pub fn verdict(&self, class: &str) -> Option<Verdict> {
        self.get(class).map(|e| e.verdict)
    }
}

pub const CHEN: &str = "rectifying-chen";
pub const POSITION: &str = "rectifying-position";
pub const MYLLER: &str = "rectifying-myller";
pub const HELIX: &str = "helix";
pub const SPHERICAL: &str = "spherical";
pub const BERTRAND: &str = "bertrand";

/// Runs every classifier that applies to the curve's dimension on `grid`.
/// A classifier that errors (for instance on a straight line) is recorded
/// as a degenerate `no` carrying the error message.
pub fn classify_curve(curve: &Curve, grid: &[f64], cfg: &ToleranceConfig) -> Result<ClassificationReport> {
    cfg.validate()?;
    crate::framing::check_grid(grid, 5)?;
    let mut report = ClassificationReport::default();
    let mut put = |class: &str, r: Result<ReportEntry>| {
        let entry = r.unwrap_or_else(|e| ReportEntry::failed(&e, cfg));
        report.insert(class, entry);
    };
    put(POSITION, is_rectifying_position(curve, grid, cfg));
    put(HELIX, is_helix(curve, grid, cfg));
    put(
        SPHERICAL,
        (|| {
            let f0 = initial_frame(curve, grid[0], cfg)?;
            let field = rmf_double_reflection(curve, grid, &f0, cfg)?;
            let curv = rm_curvatures_from_curve(&field, cfg)?;
            is_spherical(curve, &field, &curv, cfg)
        })(),
    );
    if curve.dim() == 3 {
        put(CHEN, is_rectifying_chen(curve, grid, cfg));
        put(
            MYLLER,
            myller_inputs_from_frenet(curve, grid, cfg).and_then(|m| is_rectifying_type_myller(&m, cfg)),
        );
        put(BERTRAND, bishop_curvatures(curve, grid, cfg).and_then(|c| is_bertrand(&c, cfg)));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::numeric::linspace;

    #[test]
    fn verdict_bands() {
        assert_eq!(Verdict::from_residual(0.0, 1e-5), Verdict::Yes);
        assert_eq!(Verdict::from_residual(1e-5, 1e-5), Verdict::Indeterminate);
        assert_eq!(Verdict::from_residual(9.9e-3, 1e-5), Verdict::Indeterminate);
        assert_eq!(Verdict::from_residual(1e-2, 1e-5), Verdict::No);
    }

    #[test]
    fn shrinking_tolerance_never_turns_no_into_yes() {
        for r in [0.0, 1e-9, 1e-6, 1e-3, 1.0] {
            let mut last = Verdict::from_residual(r, 1e-1);
            for tol in [1e-2, 1e-3, 1e-5, 1e-8, 1e-12] {
                let v = Verdict::from_residual(r, tol);
                assert!(!(last == Verdict::No && v == Verdict::Yes));
                assert!(!(last == Verdict::Indeterminate && v == Verdict::Yes));
                last = v;
            }
        }
    }

    #[test]
    fn helix_report() {
        let cfg = ToleranceConfig::default();
        let grid = linspace(0.0, 120.0, 1201);
        let r = classify_curve(&builtin::helix(), &grid, &cfg).unwrap();
        assert_eq!(r.verdict(HELIX), Some(Verdict::Yes));
        assert_eq!(r.verdict(BERTRAND), Some(Verdict::Yes));
        assert_eq!(r.verdict(SPHERICAL), Some(Verdict::No));
        assert_eq!(r.verdict(CHEN), Some(Verdict::No));
        assert_eq!(r.verdict(POSITION), Some(Verdict::No));
        assert_eq!(r.verdict(MYLLER), Some(Verdict::No));
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.starts_with("{\"bertrand\":{\"verdict\":\"yes\""), "{json}");
    }

    #[test]
    fn line_report_has_degenerate_entries() {
        let cfg = ToleranceConfig::default();
        let r = classify_curve(&builtin::line(3), &linspace(0.0, 1.0, 11), &cfg).unwrap();
        let helix = r.get(HELIX).unwrap();
        assert_eq!(helix.verdict, Verdict::Yes);
        assert!(helix.degenerate);
        assert_eq!(r.verdict(BERTRAND), Some(Verdict::No));
        assert!(r.get(POSITION).unwrap().note.is_some());
    }

    #[test]
    fn great_circle_is_spherical() {
        let cfg = ToleranceConfig::default();
        let c = builtin::great_circle(1.0);
        let r = classify_curve(&c, &linspace(0.0, 6.0, 601), &cfg).unwrap();
        let e = r.get(SPHERICAL).unwrap();
        assert_eq!(e.verdict, Verdict::Yes);
        assert!((e.params[3] - 1.0).abs() < 1e-9);
    }
}
