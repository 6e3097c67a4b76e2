use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension {0} is outside the supported range {1}")]
    UnsupportedDimension(usize, &'static str),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },

    #[error("non-finite coefficient at blade {0}")]
    NonFinite(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular evaluation: {0}")]
    Singular(String),

    #[error("failed to converge after {iterations} iterations: {detail}")]
    Convergence { iterations: usize, detail: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("mesh error: {0}")]
    Mesh(String),

    #[error("construction error: {0}")]
    Construction(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("shape error: {0}")]
    Shape(String),
}

pub type Result<T> = std::result::Result<T, Error>;
