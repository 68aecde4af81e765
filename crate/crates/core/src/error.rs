//! One error type over all modules, for callers that mix them.

use thiserror::Error;

use crate::delaunay::DelaunayError;
use crate::linalg::LinalgError;
use crate::monoid::MonoidError;
use crate::paving::PavingError;
use crate::pwl::PwlError;
use crate::siegel::SiegelError;
use crate::theta::ThetaError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Paving(#[from] PavingError),
    #[error(transparent)]
    Delaunay(#[from] DelaunayError),
    #[error(transparent)]
    Pwl(#[from] PwlError),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Siegel(#[from] SiegelError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
}

impl Error {
    /// Stable machine-readable name of the failure.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Linalg(e) => e.code(),
            Error::Paving(e) => e.code(),
            Error::Delaunay(e) => e.code(),
            Error::Pwl(e) => e.code(),
            Error::Monoid(e) => e.code(),
            Error::Siegel(e) => e.code(),
            Error::Theta(e) => e.code(),
        }
    }
}
