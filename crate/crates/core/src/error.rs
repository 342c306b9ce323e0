use thiserror::Error;

/// Errors raised by the library.
///
/// The variants are coarse on purpose: the command line maps each one onto a
/// distinct process exit status.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// A non-finite value appeared while integrating a flow. `last_good` is
    /// the last finite state in row-major order, `last_good_t` its time.
    #[error("integration diverged at t = {t}")]
    Divergence {
        t: f64,
        last_good_t: f64,
        last_good: Vec<f64>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}

pub(crate) fn contract<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::ContractViolation(msg.into()))
}
