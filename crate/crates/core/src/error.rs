use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature hit its refinement cap before meeting the tolerance.
    #[error("quadrature did not converge after {levels} levels (last estimate {last:e}, previous {previous:e})")]
    NumericFailure {
        levels: u32,
        last: f64,
        previous: f64,
    },

    /// A rescaling or construction would need frequencies the grid cannot resolve.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// Malformed grid-function file.
    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
