use thiserror::Error;

use crate::group::GroupError;
use crate::poly::PolyError;
use crate::qexp::QexpError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Top-level error. The variants map one-to-one onto the CLI exit-code classes.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Qexp(#[from] QexpError),
    /// An internal cross-check failed (engine mismatch, convention breach).
    #[error("verification failure: {0}")]
    Verification(String),
}

impl Error {
    /// True for errors caused by malformed text input.
    pub fn is_parse(&self) -> bool {
        match self {
            Error::Poly(e) => e.is_parse(),
            Error::Group(e) => e.is_parse(),
            Error::Qexp(e) => e.is_parse(),
            Error::Verification(_) => false,
        }
    }
}
