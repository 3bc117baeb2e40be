use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not the 2x2 image of a quaternion (pattern deviation {deviation:e})")]
    NotQuaternionic { deviation: f64 },

    #[error("operation undefined for the zero quaternion")]
    ZeroQuaternion,

    #[error("slice axis must be a nonzero pure quaternion")]
    DegenerateAxis,

    #[error("operator exponential did not converge (norm {norm:e})")]
    NonConvergence { norm: f64 },

    #[error("truncation tail {tail:e} exceeds tolerance {tol:e}; try dim >= {suggested_dim}")]
    InsufficientDim {
        tail: f64,
        tol: f64,
        suggested_dim: usize,
    },

    #[error("state is not normalized: norm^2 = {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("quantity undefined: {0}")]
    Undefined(&'static str),

    #[error("parameters do not share a single slice (off-slice component {deviation:e})")]
    OffSlice { deviation: f64 },

    #[error("invalid protected block: margin {margin} with dim {dim}")]
    InvalidBlock { dim: usize, margin: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("element lies outside the span (residual {residual:e})")]
    OutsideSpan { residual: f64 },

    #[error("quadrature did not converge under grid doubling (change {change:e})")]
    GridNotConverged { change: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
