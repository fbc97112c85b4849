use thiserror::Error;

/// Errors raised by reachkit operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("skewered precondition violated: {0}")]
    SkeweredViolation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dim_mismatch(expected: usize, found: usize, what: &str) -> Error {
    Error::DimensionMismatch(format!("{what}: expected {expected}, found {found}"))
}
