use thiserror::Error;

/// Errors produced by the nonlocality library.
#[derive(Debug, Error)]
pub enum Error {
    /// The caller violated a precondition (dimension, range, order).
    #[error("usage error: {0}")]
    Usage(String),
    /// The input is not a valid mathematical object (non-Hermitian operator,
    /// unnormalized state, Bloch vector outside the ball, ...).
    #[error("domain error: {0}")]
    Domain(String),
    #[error("eigenvalue iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
