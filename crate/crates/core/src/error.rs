use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("register index {index} out of range for {count} registers")]
    RegisterOutOfRange { index: usize, count: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("map is not trace preserving (deviation {0:.3e})")]
    NotTracePreserving(f64),

    #[error("{0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("dimension {0} exceeds the supported maximum {1}")]
    TooLarge(usize, usize),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("invalid hash parameters: {0}")]
    InvalidHash(String),

    #[error("attack needs m <= n, got m = {m}, n = {n}")]
    MExceedsN { m: usize, n: usize },

    #[error("unknown kind `{0}`")]
    UnknownKind(String),

    #[error("reveal requested before any commitment")]
    RevealBeforeCommit,

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
