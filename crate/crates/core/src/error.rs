use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("product space is not Gorenstein")]
    NotGorenstein,

    #[error("cone is not simplicial and full-dimensional: {0}")]
    NotSimplicial(String),

    #[error("monomial basis of size {needed} exceeds the configured cap {cap}")]
    CapExceeded { cap: usize, needed: usize },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("point lies in the indeterminacy locus: {0}")]
    Indeterminacy(String),

    #[error("point does not lie on the variety: {0}")]
    NotOnVariety(String),

    #[error("divisorial contraction case (d = 1): no flipped model")]
    DivisorialContraction,

    /// A well-formed request that the theory does not answer.
    #[error("refused: {0}")]
    Refused(String),
}
