use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum CoreError {
    /// An argument violates its documented contract (bad shape, bad range).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A precondition on the numerical state of an input failed.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// SVD did not converge within the iteration budget.
    #[error("SVD failed to converge on a {rows}x{cols} matrix")]
    SvdFailure { rows: usize, cols: usize },

    /// An internal numerical consistency check failed.
    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serialization(#[from] serde_json::Error),

    /// On-disk instance data is internally inconsistent.
    #[error("corrupt instance data: {0}")]
    CorruptData(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;

impl CoreError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        CoreError::InvalidArgument(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        CoreError::Precondition(msg.into())
    }
}
