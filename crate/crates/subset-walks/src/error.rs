use thiserror::Error;

#[derive(Debug, Error)]
pub enum SubsetError {
    #[error(transparent)]
    Engine(#[from] exact_engine::EngineError),

    #[error("invalid subset: {0}")]
    BadSubset(String),

    #[error("level mismatch: expected {expected}, got {got}")]
    LevelMismatch { expected: usize, got: usize },

    #[error("set {0:#x} has zero marginal mass")]
    ZeroMarginal(u64),

    #[error("walk is not ergodic: {0}")]
    NotErgodic(String),

    #[error("invalid parameter: {0}")]
    BadParameter(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
