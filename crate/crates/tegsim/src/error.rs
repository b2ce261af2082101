//! Error type shared by the whole toolkit, with the CLI exit-code map.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A numeric argument is outside its admissible range.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A domain invariant does not hold for the given values.
    #[error("validation failed: {0}")]
    Validation(String),

    /// Configuration file could not be parsed or merged.
    #[error("config error: {0}")]
    Config(String),

    /// The iterative solver hit its iteration cap.
    #[error("solver did not converge after {iterations} iterations (relative residual {residual:.3e})")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        /// Relative residual after each iteration, for diagnostics.
        history: Vec<f64>,
    },

    /// A requested computation exceeds a configured resource budget.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Exit-code map used by the CLI:
    /// 0 ok, 1 I/O, 2 config error, 3 solver non-convergence,
    /// 4 validation / invalid input, 5 resource limit.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 1,
            Error::Config(_) => 2,
            Error::NonConvergence { .. } => 3,
            Error::InvalidInput(_) | Error::Validation(_) => 4,
            Error::ResourceLimit(_) => 5,
        }
    }
}
