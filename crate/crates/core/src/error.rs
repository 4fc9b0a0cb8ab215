use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("remez iteration did not converge in {iterations} steps (ratio {ratio:.6})")]
    NonConvergence { iterations: usize, ratio: f64 },

    #[error("bracket [{lo}, {hi}] lost its sign change while locating {what}")]
    LostBracket {
        what: &'static str,
        lo: f64,
        hi: f64,
    },

    #[error("singular linear system: {0}")]
    SingularSystem(String),

    #[error("ill-conditioned moment system: relative residual {residual:e} exceeds {threshold:e}")]
    IllConditioned { residual: f64, threshold: f64 },

    #[error("duplicate data point at index {0}")]
    DuplicatePoint(usize),

    #[error("non-positive value {value} at index {index}")]
    NonPositive { index: usize, value: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for failures of the numerical pipeline rather than bad inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::LostBracket { .. }
                | Error::SingularSystem(_)
                | Error::IllConditioned { .. }
        )
    }
}
