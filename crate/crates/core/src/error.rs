use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("operation requires an explicit marked set")]
    MissingMarkedSet,

    #[error("{what}: n = {n} exceeds the cap of {cap} qubits")]
    CapExceeded { what: &'static str, n: u32, cap: u32 },

    #[error("weighted normalization drifted by {drift:e}")]
    NormalizationDrift { drift: f64 },

    #[error("gradient is zero; line search is undefined")]
    ZeroGradient,

    #[error("unitary not reachable: gradient leaves the invariant plane by {residual:e}")]
    Unreachable { residual: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
