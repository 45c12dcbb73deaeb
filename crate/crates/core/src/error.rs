use thiserror::Error;

use crate::graded::Degree;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a subspace: {0}")]
    NotASubspace(String),

    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("grading mode mismatch: {0}")]
    ModeMismatch(String),

    #[error("degree mismatch: {what} has degree {found:?}, expected {expected:?}")]
    DegreeMismatch {
        what: String,
        found: Degree,
        expected: Degree,
    },

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("flavor error: {0}")]
    Flavor(String),

    #[error("invalid blow-up datum: {0}")]
    InvalidDatum(String),

    #[error("invalid double complex: {0}")]
    InvalidComplex(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}
