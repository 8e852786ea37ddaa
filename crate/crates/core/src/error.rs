//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("infeasible problem: {0}")]
    Infeasible(String),

    #[error("config error in `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("{0}")]
    Usage(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit status for this error: 2 for configuration and usage
    /// problems, 3 for infeasible allocations, 4 for numeric failures and
    /// 1 for anything else (I/O, internal contract violations).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::Usage(_) => 2,
            Error::Infeasible(_) => 3,
            Error::Numeric(_) | Error::Degenerate(_) => 4,
            _ => 1,
        }
    }

    pub(crate) fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            reason: reason.into(),
        }
    }
}
