use thiserror::Error;

/// Failures raised by the linear-algebra and regression routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("matrix is not positive definite (pivot {pivot} at column {column} is below tolerance {tolerance})")]
    NotPositiveDefinite {
        column: usize,
        pivot: f64,
        tolerance: f64,
    },
    #[error("rank deficient: estimated rank {rank}, required {required}")]
    RankDeficient { rank: usize, required: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("value overflows double precision (log magnitude {log_mag})")]
    Overflow { log_mag: f64 },
    #[error("target has zero variance")]
    ZeroVariance,
    #[error("projection of the centered target is zero")]
    ZeroProjection,
    #[error("at least {required} samples required, found {found}")]
    InsufficientSamples { required: usize, found: usize },
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
}

pub type Result<T> = std::result::Result<T, Error>;
