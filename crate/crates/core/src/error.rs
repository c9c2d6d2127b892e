use thiserror::Error;

/// Errors raised by the distribution, fitting and I/O layers.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A computation produced a value that is not representable or not valid
    /// (negative density beyond round-off, non-finite likelihood, ...).
    #[error("numeric error: {0}")]
    Numeric(String),

    /// Malformed input text (CSV, JSON, flag values).
    #[error("parse error: {0}")]
    Parse(String),

    /// Well-formed input whose shape does not match what is required.
    #[error("schema error: {0}")]
    Schema(String),

    /// The observed information matrix is not positive definite, so Wald
    /// standard errors do not exist.
    #[error("information matrix is not positive definite (eigenvalues {eigenvalues:?})")]
    NotPositiveDefinite { eigenvalues: Vec<f64> },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn numeric(msg: impl Into<String>) -> Error {
    Error::Numeric(msg.into())
}
