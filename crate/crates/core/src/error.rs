use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} = {value} is outside the admissible domain ({domain})")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// A series or quadrature did not reach its tolerance. The best estimate is kept
    /// so callers can still report a partial value.
    #[error("{what} did not converge (best estimate {estimate:e}, error {error:e})")]
    Convergence {
        what: &'static str,
        estimate: f64,
        error: f64,
    },

    #[error("step {step:e} is too small for abscissa {abscissa:e}")]
    StepUnderflow { step: f64, abscissa: f64 },

    #[error("ill-conditioned fit: {0}")]
    IllConditioned(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("out of scope: {0}")]
    OutOfScope(String),

    #[error("{path}: {message}")]
    Parse { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for failures of the numerical machinery (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Convergence { .. } | Error::StepUnderflow { .. } | Error::IllConditioned(_)
        )
    }
}
