use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Precondition violation on an operation's inputs.
    #[error("domain error: {0}")]
    Domain(String),

    /// A requested computation exceeds the configured memory budget.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// A code stream could not be decoded.
    #[error("corrupt stream: {0}")]
    Corrupt(String),

    #[error("io error: {0}")]
    Io(#[from] io::Error),
}
