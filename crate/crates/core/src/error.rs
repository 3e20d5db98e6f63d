use thiserror::Error;

/// Errors produced by the numeric modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {what} (got {value})")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("quadrature did not converge: partial result {partial}, achieved error {achieved:e}")]
    QuadratureNonConvergence { partial: f64, achieved: f64 },

    #[error("numerical consistency check failed: {0}")]
    Consistency(String),

    #[error("phase vector has {got} entries but the window needs {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("{failed} of {total} Monte Carlo realizations failed")]
    TooManyFailures { failed: usize, total: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
