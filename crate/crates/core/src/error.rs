use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("group mismatch: expected {expected}, found {found}")]
    GroupMismatch { expected: String, found: String },
    #[error("element {residues:?} is not in {group}")]
    ElementOutOfRange { group: String, residues: Vec<usize> },
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("ill-defined homomorphism: {0}")]
    IllDefinedHomomorphism(String),
    #[error("{what} {actual} exceeds bound {bound}")]
    BoundExceeded {
        what: &'static str,
        actual: usize,
        bound: usize,
    },
    #[error("length mismatch: expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("postcondition violated: {0}")]
    Postcondition(String),
    #[error("non-real value where a real one is required: {0}")]
    NonReal(String),
    #[error("Haar scale must be positive")]
    NonPositiveScale,
    #[error("division by zero: {0}")]
    ZeroDivision(String),
    #[error("not symmetric positive definite: {0}")]
    NotSpd(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("insufficient decay at the grid boundary: {0:e}")]
    InsufficientDecay(f64),
}
