use thiserror::Error;

/// Errors raised by the dissimilarity, clustering, selection and generation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("too few observations: need at least {needed}, got {got}")]
    TooFewObservations { needed: usize, got: usize },

    #[error("expected a {expected} matrix, got {got}")]
    WrongKind {
        expected: &'static str,
        got: &'static str,
    },

    #[error("invalid dissimilarity matrix: {0}")]
    InvalidMatrix(String),

    #[error("cluster count {k} out of range 1..={max}")]
    InvalidK { k: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("isolated vertex {0} has zero degree in the similarity graph")]
    IsolatedVertex(usize),

    #[error("eigensolver failed to converge after {0} iterations")]
    NoConvergence(usize),

    #[error("degenerate dispersion: within-cluster dispersion is zero at k={0}")]
    DegenerateDispersion(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
