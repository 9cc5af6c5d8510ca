use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid tableau: {0}")]
    InvalidTableau(String),

    #[error("value {0} is already present in the tableau")]
    DuplicateEntry(u32),

    #[error("n = {n} exceeds the enumeration cap of {cap}")]
    CapExceeded { n: u32, cap: u32 },

    #[error("leading coefficient of the recurrence vanishes at n = {0}")]
    SingularRecurrence(i64),

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
