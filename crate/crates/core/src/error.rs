use thiserror::Error;

use crate::subset::Subset;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A parameter fell outside its open legal interval.
    #[error("{what} = {value} violates {bound}")]
    Range {
        what: String,
        value: String,
        bound: String,
    },

    #[error("length vector lies on the wall W_{0}")]
    OnWall(Subset),

    #[error("length vector is not in the interior of the cone: {0}")]
    Boundary(String),

    #[error("closure did not converge: residual {residual:e} after {iterations} iterations")]
    NonConvergence { residual: f64, iterations: usize },

    #[error("fewer than three distinct directions; no moduli point")]
    NoModuli,

    #[error("no bubble limit: {0}")]
    NoLimit(String),

    #[error("malformed stable polygon: {0}")]
    Structural(String),

    #[error("no epsilon assigned for subset {0}")]
    MissingEpsilon(Subset),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("internal: {0}")]
    Internal(String),
}

impl Error {
    /// Errors caused by the caller's data (walls, boundaries, ranges) rather
    /// than by a failure of the library.
    pub fn is_domain(&self) -> bool {
        !matches!(self, Error::Internal(_) | Error::NonConvergence { .. })
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
