//! Command-line front end for `rmf-core`. [`run`] executes one parsed
//! command and returns what should go to stdout; files are written as a side
//! effect. Errors map to exit codes through [`exit_code`].

pub mod args;
mod commands;
pub mod demo;
pub mod svg;

use std::path::{Path, PathBuf};

pub use args::{Cli, Command, Format, Method};
use rmf_core::{Error, ErrorKind, Result, ToleranceConfig};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IO: i32 = 4;

pub fn exit_code(err: &Error) -> i32 {
    match err.kind() {
        ErrorKind::Usage => EXIT_USAGE,
        ErrorKind::Numerical => EXIT_NUMERICAL,
        ErrorKind::Io => EXIT_IO,
    }
}

/// Default tolerances with `residual_tol` taken from `rmf_tol` (the value of
/// `RMF_TOL`) when set.
pub fn tolerances(rmf_tol: Option<&str>) -> Result<ToleranceConfig> {
    let mut cfg = ToleranceConfig::default();
    if let Some(raw) = rmf_tol {
        let tol: f64 = raw
            .trim()
            .parse()
            .map_err(|_| Error::Usage(format!("RMF_TOL must be a number, got '{raw}'")))?;
        cfg = cfg.with_residual_tol(tol);
        cfg.validate().map_err(|e| Error::Usage(e.to_string()))?;
    }
    Ok(cfg)
}

pub fn run(cli: &Cli, rmf_tol: Option<&str>) -> Result<String> {
    let cfg = tolerances(rmf_tol)?;
    let mut out = Sink::new(cli.out.clone());
    match cli.command {
        Command::Frame => commands::frame(cli, &cfg, &mut out)?,
        Command::Curvature => commands::curvature(cli, &cfg, &mut out)?,
        Command::Construct => commands::construct(cli, &cfg, &mut out)?,
        Command::Classify => commands::classify(cli, &cfg, &mut out)?,
        Command::Export => commands::export(cli, &cfg, &mut out)?,
        Command::DemoHelix => demo::run(cli, &cfg, &mut out)?,
    }
    Ok(out.stdout)
}

/// Collects stdout text and writes files. With an output path the primary
/// result goes to that file and companions land next to it as
/// `<stem>.<suffix>`; without one the primary result is printed.
pub(crate) struct Sink {
    out: Option<PathBuf>,
    pub(crate) stdout: String,
}

impl Sink {
    fn new(out: Option<PathBuf>) -> Self {
        Self { out, stdout: String::new() }
    }

    pub(crate) fn print(&mut self, line: impl AsRef<str>) {
        self.stdout.push_str(line.as_ref());
        self.stdout.push('\n');
    }

    pub(crate) fn write(&mut self, path: &Path, contents: &str) -> Result<()> {
        rmf_core::io::write_file(path, contents)?;
        self.print(format!("wrote {}", path.display()));
        Ok(())
    }

    pub(crate) fn emit(&mut self, primary: &str, companions: &[(&str, String)]) -> Result<()> {
        let Some(path) = self.out.clone() else {
            self.stdout.push_str(primary);
            return Ok(());
        };
        self.write(&path, primary)?;
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        for (suffix, text) in companions {
            let p = path.with_file_name(format!("{stem}.{suffix}"));
            self.write(&p, text)?;
        }
        Ok(())
    }

    pub(crate) fn out_path(&self) -> Option<&Path> {
        self.out.as_deref()
    }
}
