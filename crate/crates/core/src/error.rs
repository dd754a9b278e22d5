use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument fell outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An exact computation would exceed its enumeration cap.
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    /// An iterative solver failed to reach its tolerance.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// Structurally invalid input (bad weights, asymmetric matrix, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The operation is defined, but not for this argument class.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A text fixture could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// A witness search exhausted its schedule.
    #[error("witness search failed: {0}")]
    WitnessSearch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
