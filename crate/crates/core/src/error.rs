use thiserror::Error;

/// Error type shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A point lies on or too close to a singular set, or an operation left its domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// Invalid parameters or a violated side condition.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// Evaluation hit a pole of an elliptic function.
    #[error("pole at z = {z}")]
    Pole { z: f64 },
    /// Series evaluation could not reach the requested accuracy.
    #[error("precision error: {0}")]
    Precision(String),
    /// An ODE integration failed to converge.
    #[error("integration error: {0}")]
    Integration(String),
    /// Rejection sampling ran out of budget.
    #[error("sampling error: {0}")]
    Sampling(String),
    /// Malformed or inconsistent configuration input.
    #[error("configuration error: {0}")]
    Config(String),
    /// Grid solver failure (instability, bad time step).
    #[error("solver error: {0}")]
    Solver(String),
}

impl Error {
    /// Errors that mean "the requested point is outside the valid region".
    pub fn is_domain_like(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Pole { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}
