use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive refinement ran out of budget before reaching the tolerance.
    #[error("quadrature did not converge: value {value:e}, error estimate {error:e}")]
    NonConvergence { value: f64, error: f64 },

    /// Malformed or inconsistent input.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The requested operation is not available for this kind of object.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An integrand is not integrable against the requested measure.
    #[error("not integrable: {0}")]
    NotIntegrable(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
