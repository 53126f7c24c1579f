use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("unsupported space: {0}")]
    UnsupportedSpace(String),

    #[error("quadrature point count {0} out of range (1..=10)")]
    QuadratureRange(usize),

    #[error("matrix not SPD: pivot {pivot:e} at row {row}")]
    NotSpd { row: usize, pivot: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("diagnostic requires a uniform piecewise-linear space: {0}")]
    DiagnosticSetting(String),

    #[error("rate fit rejected: {0}")]
    RateFit(String),

    #[error("numerical blowup at t = {t}")]
    Blowup { t: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("config error for key '{key}': {msg}")]
    Config { key: String, msg: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
