//! Error type shared across the simulation core.

use thiserror::Error;

/// Errors produced by constructors, validators, and runners in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A numeric argument fell outside its documented domain.
    #[error("{name} = {value} violates {constraint}")]
    Domain {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// A configuration field is structurally invalid.
    #[error("invalid {field}: {reason}")]
    Config { field: String, reason: String },

    /// A run inside an ensemble failed; `point` and `run` locate it.
    #[error("run {run} at grid point {point} failed: {source}")]
    Ensemble {
        point: usize,
        run: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that indicate bad input rather than a failure while
    /// executing otherwise-valid work.
    pub fn is_validation(&self) -> bool {
        match self {
            Error::Domain { .. } | Error::Config { .. } => true,
            Error::Ensemble { source, .. } => source.is_validation(),
        }
    }
}
