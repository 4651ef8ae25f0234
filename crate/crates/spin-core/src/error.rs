use thiserror::Error;

/// Errors raised by Hamiltonian construction and evaluation.
#[derive(Debug, Error)]
pub enum SpinError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("site {site} out of range for n = {n}")]
    SiteOutOfRange { site: usize, n: usize },

    #[error("invalid term: {0}")]
    InvalidTerm(String),

    #[error("table length {len} is not 2^n for any supported n")]
    BadTableLength { len: usize },

    #[error("coordinate {index} = {value} lies outside [-1, 1]")]
    OutOfDomain { index: usize, value: f64 },

    #[error("site {0} appears in both A and B of a pinning context")]
    OverlappingPinning(usize),

    #[error("n = {n} exceeds the limit {limit} for {what}")]
    TooLarge {
        n: usize,
        limit: usize,
        what: &'static str,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
