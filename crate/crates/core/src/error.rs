use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("infeasible: {0}")]
    Infeasible(&'static str),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },

    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("strategy horizon too short to resolve an exit at distance {distance}")]
    HorizonTooShort { distance: f64 },

    #[error("precondition violated: {0}")]
    Precondition(&'static str),

    #[error("invalid strategy: {0}")]
    InvalidStrategy(&'static str),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: &'static str) -> Self {
        Error::InvalidParameter { name, reason }
    }
}

/// Rejects non-finite or non-positive values.
pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::param(name, "must be a finite positive number"))
    }
}
