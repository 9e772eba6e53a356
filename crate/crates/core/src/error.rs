use thiserror::Error;

/// Errors raised by the constructions and checks in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("cannot combine a ket with an operator")]
    KindMismatch,

    #[error("cannot trace out {k} of {n} qubits")]
    BadPartialTrace { k: usize, n: usize },

    #[error("projector has rank 0")]
    ZeroRankProjector,

    #[error("matrix is not an isometry (residual {0:e})")]
    NotIsometry(f64),

    #[error("matrix is not an orthogonal projector (residual {0:e})")]
    NotProjector(f64),

    #[error("{n} qubits exceeds the dense limit of {max}")]
    TooLarge { n: usize, max: usize },

    #[error("invalid noise probabilities: {0}")]
    InvalidNoise(String),

    #[error("{family} code requires {parity} n > 2, got n = {n}")]
    BadCodeSize {
        family: &'static str,
        parity: &'static str,
        n: usize,
    },

    #[error("rank {k} is outside 1..={max}")]
    RankOutOfRange { k: usize, max: usize },

    #[error("multiset of size {0} is too large for enumeration")]
    EnumerationTooLarge(usize),

    #[error("operators do not commute")]
    NonCommuting,

    #[error("R^dagger E R does not factor as a single-qubit block times identity (residual {0:e})")]
    SyndromeFactorization(f64),

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
