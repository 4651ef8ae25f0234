use thiserror::Error;

/// Errors raised by exact-enumeration operations.
#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Spin(#[from] spin_core::SpinError),

    #[error("n = {n} exceeds the limit {limit} for {what}")]
    TooLarge {
        n: usize,
        limit: usize,
        what: &'static str,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state {state} has zero probability; full support is required")]
    ZeroProbabilityState { state: usize },

    #[error("operator is not reversible: detailed-balance deviation {deviation:e}")]
    NotReversible { deviation: f64 },

    #[error("invalid parameter: {0}")]
    BadParameter(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("chain did not reach total-variation {eps} within {cap} steps")]
    MixingCapExceeded { eps: f64, cap: usize },
}
