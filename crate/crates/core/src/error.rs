use thiserror::Error;

/// Errors raised by model construction, evaluation and persistence.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A domain object violates one of its invariants.
    #[error("validation error: {0}")]
    Validation(String),

    /// A caller-supplied argument is out of range or inconsistent.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A function was evaluated outside its domain (e.g. a utility table
    /// missing an income, or an inverse evaluated out of range).
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical procedure failed (non-convergence, non-finite result).
    #[error("numeric error: {0}")]
    Numeric(String),

    /// A document could not be parsed. `path` is a JSON-pointer-style
    /// location (or `row N` for CSV input).
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    /// True for errors caused by bad input (as opposed to numerical failure).
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Numeric(_) | Error::Domain(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
