use thiserror::Error;

#[derive(Debug, Error)]
pub enum NnError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("final layer activation must be identity (neuron {neuron} is {found})")]
    NonIdentityOutput { neuron: usize, found: String },
    #[error("network has no layers")]
    Empty,
    #[error("activation family mismatch: {0} vs {1}")]
    FamilyMismatch(String, String),
    #[error("operation requires a strict ReLU network")]
    NotStrictRelu,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("iteration did not converge after {0} sweeps")]
    NonConvergence(usize),
    #[error("matrix is not symmetric positive definite")]
    NotSpd,
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, NnError>;

pub(crate) fn dim_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(NnError::DimensionMismatch(msg.into()))
}

pub(crate) fn arg_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(NnError::InvalidArgument(msg.into()))
}
