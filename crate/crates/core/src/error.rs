use thiserror::Error;

/// Errors raised by the distance, copula and integration routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// A quantile at level 0 or 1 of an unbounded law.
    #[error("non-finite value: quantile at level {level} is {value}")]
    NonFinite { level: f64, value: f64 },

    #[error("integrand is not finite at x = {at}")]
    Evaluation { at: f64 },

    #[error("quadrature did not converge: best value {value}, error estimate {estimate}")]
    Convergence { value: f64, estimate: f64 },

    #[error("parse error at position {position} ({token:?}): {message}")]
    Parse {
        token: String,
        position: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Numerical failures (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Evaluation { .. } | Error::Convergence { .. } | Error::NonFinite { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
