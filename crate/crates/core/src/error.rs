use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad failure class, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Numerical,
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid vector: {0}")]
    InvalidVector(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parameter {s} outside usable domain [{min}, {max}]")]
    Domain { s: f64, min: f64, max: f64 },

    #[error("unsupported derivative order {0} (supported: 1..=3)")]
    UnsupportedOrder(usize),

    #[error("curve is singular (speed below guard) at parameter {s}")]
    SingularCurve { s: f64 },

    #[error("frame degeneracy at s = {s}: Gram determinant {gram:e}")]
    FrameDegeneracy { s: f64, gram: f64 },

    #[error("degenerate step between samples {index} and {next}: coincident points")]
    DegenerateStep { index: usize, next: usize },

    #[error("grid too coarse: step {step} exceeds 0.1/max|k| = {limit}")]
    CoarseGrid { step: f64, limit: f64 },

    #[error("insufficient data: need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("curvature k{index} vanishes or changes sign near s = {locations:?}")]
    Singularity { index: usize, locations: Vec<f64> },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("free coefficient is not constant (relative variation {variation:e})")]
    NotConstant { variation: f64 },

    #[error("zero vector at s = {s}")]
    ZeroVector { s: f64 },

    #[error("sphere fit is degenerate: {0}")]
    FitDegeneracy(String),

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("invalid rectifying spec: {0}")]
    InvalidSpec(String),

    #[error("operation requires dimension {expected}, curve has {got}")]
    UnsupportedDimension { expected: String, got: usize },

    #[error("usage: {0}")]
    Usage(String),

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Usage(_) | Error::InvalidConfig(_) | Error::InvalidSpec(_) => ErrorKind::Usage,
            Error::Parse { .. } | Error::Io { .. } => ErrorKind::Io,
            _ => ErrorKind::Numerical,
        }
    }
}
