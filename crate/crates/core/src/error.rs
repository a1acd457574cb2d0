use thiserror::Error;

/// Errors produced by the library and the command-line front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("term {0} is not in the corner set of the order ideal")]
    NotACorner(String),

    #[error("term set is not closed under divisibility: {0} is missing")]
    NotAnOrderIdeal(String),

    #[error("invalid design: {0}")]
    InvalidDesign(String),

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("coordinate {axis} is constant and cannot be standardized")]
    ZeroRange { axis: usize },

    #[error("design points {first} and {second} coincide")]
    DuplicatePoints { first: usize, second: usize },

    #[error("matrix is rank deficient")]
    RankDeficient,

    #[error("matrix has no entries")]
    EmptyMatrix,

    #[error("exact arithmetic unavailable: {0}")]
    ExactUnavailable(String),

    #[error("enumeration budget of {budget} exhausted")]
    BudgetExceeded { budget: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
