use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("group closure exceeds the order cap of {0}")]
    OrderCap(usize),
    #[error("ambient dimension {dim} exceeds the cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("invalid permutation: {0}")]
    BadPermutation(String),
    #[error("invalid subgroup chain: {0}")]
    ChainViolation(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("tower is not {0}")]
    NotDepth(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("not a division algebra: {0}")]
    NotDivision(String),
    #[error("internal invariant breach: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
