use thiserror::Error;

/// Errors produced by the exact and floating backends and the inverse layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix dimensions must be positive and match the entry count ({rows}x{cols} with {len} entries)")]
    BadDimensions {
        rows: usize,
        cols: usize,
        len: usize,
    },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    /// The characteristic polynomial has a root that is not rational.
    #[error("spectrum is not rational; the exact backend does not approximate")]
    IrrationalSpectrum,

    /// Numerical Jordan chain construction could not complete within tolerance.
    #[error("jordan chain construction failed: {0}")]
    ChainFailure(String),

    #[error("rank {k} out of range (max {max})")]
    RankOutOfRange { k: usize, max: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("empty input")]
    EmptyInput,

    #[error("operation {op} is not available for {what}")]
    Unsupported { op: &'static str, what: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
