use std::path::PathBuf;

use clap::{Parser, ValueEnum};

#[derive(Debug, Clone, Parser)]
#[command(
    name = "rmf",
    version,
    about = "Rotation-minimizing frames, rectifying-type curves and curve classification"
)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,

    /// Builtin curve: line, circle[:r], helix, great-circle[:r], twisted-cubic
    #[arg(long, conflicts_with = "input")]
    pub curve: Option<String>,

    /// Sampled curve CSV (`s,x1,...,xn`); classify accepts several
    #[arg(long)]
    pub input: Vec<PathBuf>,

    /// Ambient dimension for `line` and `circle`
    #[arg(long)]
    pub dim: Option<usize>,

    /// Parameter range A:B (default: the curve's domain)
    #[arg(long, allow_hyphen_values = true)]
    pub range: Option<String>,

    /// Grid size for analytic curves
    #[arg(long)]
    pub samples: Option<usize>,

    #[arg(long, value_enum, default_value_t = Method::RmfDr)]
    pub method: Method,

    /// Which coefficient is free (1-based)
    #[arg(long = "type")]
    pub type_index: Option<usize>,

    /// Fixed coefficients c1,c2,... (n-2 values)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub constants: Vec<f64>,

    /// Use this constant as the free coefficient instead of deriving it
    #[arg(long, allow_hyphen_values = true)]
    pub free_const: Option<f64>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Projection for SVG output: xy, xz or yz
    #[arg(long, default_value = "xy")]
    pub project: String,

    /// Output file (a directory for demo-helix); stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Ignore exact derivatives of builtin curves and use finite differences
    #[arg(long)]
    pub fd: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Frame,
    Curvature,
    Construct,
    Classify,
    DemoHelix,
    Export,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Frenet,
    RmfDr,
    RmfOde,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}
