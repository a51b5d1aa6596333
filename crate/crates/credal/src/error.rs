use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum Error {
    #[error("weight at index {0} is negative")]
    NegativeWeight(usize),
    #[error("weights do not sum to 1 (sum = {0})")]
    NotNormalized(String),
    #[error("index {index} out of range for support of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("operands live on different supports")]
    SupportMismatch,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("materialization size guard exceeded: {0}")]
    SizeGuardExceeded(String),
    #[error("distribution has no distributional uncertainty")]
    NoUncertainty,
    #[error("mutual-independence hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
