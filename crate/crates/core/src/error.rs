use thiserror::Error;

/// Errors raised by the library. Verdicts of the decision procedures are not
/// errors; these cover malformed input and violated preconditions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid norm: {0}")]
    InvalidNorm(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("zero vector has no active faces")]
    ZeroVector,

    #[error("sparsity parameters out of range: d = {d}, k = {k}")]
    SparsityRange { d: usize, k: usize },

    #[error("framework is not well-positioned")]
    NotWellPositioned,

    #[error("operation requires an l-infinity norm")]
    NotLinf,

    #[error("directed colouring has a zero entry at edge {0}")]
    ZeroColour(usize),

    #[error("colouring does not match the graph: {0}")]
    InvalidColouring(String),

    #[error("inconsistent linear system")]
    Inconsistent,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("search budget of {0} exceeded")]
    BudgetExceeded(u64),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
