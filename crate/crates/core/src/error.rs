use thiserror::Error;

/// Errors raised by the coefficient, cone and shift-invariant layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {0} not supported (expected 1, 2 or 3)")]
    UnsupportedDimension(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("norm exponent p = {0} not supported (use 1 or 2)")]
    UnsupportedExponent(f64),

    #[error("index {index:?} lies outside the coefficient box of radius {radius}")]
    IndexOutsideBox { index: Vec<i64>, radius: usize },

    #[error("undersampled grid: {samples} samples per unit cell, need at least {required}")]
    Undersampled { samples: usize, required: usize },

    #[error("radii {0:?} are unusable: {1}")]
    InvalidRadii(Vec<usize>, String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("classification inconclusive: {0}")]
    Inconclusive(String),

    #[error("precondition not met: {0}")]
    Precondition(String),

    #[error("counting region (n - c1) ∩ c2 is unbounded: closures of c1 and -c2 share a ray")]
    UnboundedRegion,

    #[error("cones are not compactly nested (angular margin {0:.3e})")]
    NotCompactlyContained(f64),

    #[error("invalid cone: {0}")]
    InvalidCone(String),

    #[error("grid mismatch: {0} vs {1} samples per unit")]
    GridMismatch(usize, usize),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
