use thiserror::Error;

use crate::cartan::MultiDegree;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a generalized Cartan matrix: {0}")]
    NotGcm(String),
    #[error("matrix is not symmetrizable: {0}")]
    NotSymmetrizable(String),
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("degree enumeration has {count} entries, cap is {cap}")]
    BoundTooLarge { count: usize, cap: usize },
    #[error("component {0} is not finalized")]
    MissingComponent(MultiDegree),
    #[error("prerequisite degree {0} is not finalized")]
    PrerequisiteMissing(MultiDegree),
    #[error("energy at {k} is {energy}, completion needs a positive value")]
    EnergyNotPositive { k: MultiDegree, energy: i64 },
    #[error("known columns at {k} violate the orthogonality invariant (residual {residual:e})")]
    InvariantViolation { k: MultiDegree, residual: f64 },
    #[error("complement vector at {k} leaks {leak:e} outside the exterior-square block")]
    ComplementLeak { k: MultiDegree, leak: f64 },
    #[error("completion at {k} found {found} complement vectors, Euler count predicts {expected}")]
    CompletionCount {
        k: MultiDegree,
        expected: i64,
        found: usize,
    },
    #[error("chain space of dimension {dim} exceeds the budget {cap}")]
    BudgetExceeded { dim: usize, cap: usize },
    #[error("bound does not cover degree {0}")]
    BoundTooSmall(MultiDegree),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("invalid index tuple {0:?}: consecutive entries must differ by at least 3")]
    InvalidTuple(Vec<u32>),
    #[error("matrix of size {size} exceeds the eigensolver cap {cap}")]
    MatrixTooLarge { size: usize, cap: usize },
    #[error("no interval decomposition of {0:?}")]
    NoDecomposition(Vec<i64>),
    #[error("interval decomposition of {0:?} is not unique")]
    NonUniqueDecomposition(Vec<i64>),
    #[error("product degree {0} lies outside the constructed bound")]
    OutOfBound(MultiDegree),
    #[error("malformed input: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
