use thiserror::Error;

/// Errors raised by kernel, shape, curvature and moving-plane operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("kernel is not admissible: {0}")]
    InadmissibleKernel(String),

    #[error("dimension mismatch: kernel is {kernel}-dimensional, shape is {shape}-dimensional")]
    DimensionMismatch { kernel: usize, shape: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("malformed spec: {0}")]
    Spec(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
