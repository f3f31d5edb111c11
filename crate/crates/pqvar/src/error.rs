use thiserror::Error;

/// Crate-wide error type.
///
/// The three variants mirror the process exit codes of the command-line
/// tool: `Usage` exits 2, `Validation` exits 3, `Internal` exits 4.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: bad arguments, unparseable config, out-of-scope request.
    #[error("invalid input: {0}")]
    Usage(String),
    /// Structurally well-formed input that fails a mathematical consistency check.
    #[error("validation failed: {0}")]
    Validation(String),
    /// An internal invariant was violated; indicates a bug, not bad input.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    /// Process exit code for the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 2,
            Error::Validation(_) => 3,
            Error::Internal(_) => 4,
        }
    }
}
