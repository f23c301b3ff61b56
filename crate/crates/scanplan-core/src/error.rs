//! Error type shared by every module in the crate.

use std::fmt;

/// Crate-wide error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A precondition on an argument was violated.
    InvalidArgument(String),
    /// The inputs are syntactically fine but outside the model's domain
    /// (logarithm of a non-positive number, hit probability above one, ...).
    Domain(String),
    /// The operation is not defined for this variant of the input.
    Unsupported(String),
    /// Config-text parse failure. `line` is 1-based; `None` marks a
    /// file-level problem such as a missing required key.
    Parse { line: Option<usize>, message: String },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub fn parse_at(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line: Some(line), message: msg.into() }
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse { line: None, message: msg.into() }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Unsupported(msg) => write!(f, "unsupported operation: {msg}"),
            Error::Parse { line: Some(line), message } => {
                write!(f, "config error at line {line}: {message}")
            }
            Error::Parse { line: None, message } => write!(f, "config error: {message}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
