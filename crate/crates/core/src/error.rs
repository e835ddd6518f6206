use thiserror::Error;

/// Errors raised by the transform library.
#[derive(Debug, Error)]
pub enum CstError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unsupported algebra dimension {0} (must be 1..=6)")]
    InvalidDimension(usize),

    #[error("total degree {degree} exceeds the cap of {max}")]
    DegreeTooLarge { degree: u32, max: u32 },

    #[error("divergent integral: both Gaussian exponents are zero")]
    DivergentIntegral,

    #[error("projectors are undefined for the zero direction")]
    SingularDirection,

    #[error("series did not reach tolerance {tolerance:e} within order {order}; last term bound {achieved:e}")]
    TruncationFailure {
        order: usize,
        tolerance: f64,
        achieved: f64,
    },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("weyl residual needs at least 3 uniformly spaced x0 slices, got {0}")]
    TooFewSlices(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("quadrature budget exceeded: {0}")]
    QuadratureBudget(String),

    #[error("polynomial is not monogenic (max |DP| coefficient {0:e})")]
    NotMonogenic(f64),

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("mode {max_abs} exceeds the quadrature-mode limit |k|_inf <= {limit}")]
    ModeTooLarge { max_abs: i64, limit: i64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CstError>;
