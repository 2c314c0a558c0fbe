//! Crate-wide error type.
//!
//! Errors are grouped by how the CLI reports them: validation errors (bad
//! arguments or inconsistent dimensions) exit with code 1, numerical failures
//! (divergence, singular systems, non-finite iterates) with code 2, and I/O
//! problems with code 3.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input violates a precondition: bad dimension, out-of-range parameter,
    /// malformed configuration, and the like.
    #[error("validation error: {0}")]
    Validation(String),

    /// A numerical procedure failed: non-finite values, singular pivot,
    /// non-convergence without an override.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// File emission or parsing failed.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// Process exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) => 1,
            Error::Numerical(_) => 2,
            Error::Io(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
