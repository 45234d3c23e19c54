use thiserror::Error;

/// Errors returned by every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed, non-finite or out-of-range input.
    #[error("input error: {0}")]
    Input(String),
    /// Requested rank exceeds the numerical rank or dimension.
    #[error("rank error: requested rank {requested} but only {available} available")]
    Rank { requested: usize, available: usize },
    /// Constraint set admits no solution.
    #[error("infeasible: {0}")]
    Infeasible(String),
    /// Iterative solver stopped without reaching its tolerance.
    #[error("solver did not converge after {iterations} iterations (residual {residual:.3e})")]
    Solver { iterations: usize, residual: f64 },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
