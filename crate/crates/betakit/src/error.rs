use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("points and weights have different lengths ({points} vs {weights})")]
    LengthMismatch { points: usize, weights: usize },
    #[error("negative weight at index {0}")]
    NegativeWeight(usize),
    #[error("non-finite coordinate or weight at index {0}")]
    NonFinite(usize),
    #[error("empty scale grid")]
    EmptyScaleGrid,
    #[error("empty fit region")]
    EmptyFitRegion,
    #[error("plane dimension {n} must be positive and smaller than ambient dimension {d}")]
    BadPlaneDimension { n: usize, d: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
