use thiserror::Error;

/// Errors shared by the generators, transforms and estimators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("insufficient data: needed {needed}, got {got} ({what})")]
    InsufficientData {
        what: String,
        needed: usize,
        got: usize,
    },

    #[error("admissibility violated at p = {p}: eta(p) = {eta:.4} (stderr {stderr:.4}), required eta > {required:.4}")]
    NotAdmissible {
        p: f64,
        eta: f64,
        stderr: f64,
        required: f64,
    },

    #[error("estimation failed: {0}")]
    EstimationFailed(String),

    #[error("unsupported generator: {0}")]
    UnsupportedGenerator(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
