use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("arity mismatch: {0}")]
    ArityMismatch(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid measurement: {0}")]
    InvalidMeasurement(String),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NonHermitian(f64),

    #[error("setting {setting:?} sums to {sum} (tolerance {tolerance:e})")]
    Normalization {
        setting: Vec<usize>,
        sum: f64,
        tolerance: f64,
    },

    #[error("negative entry {value} at setting {setting:?}, outcome {outcome:?}")]
    NegativeEntry {
        setting: Vec<usize>,
        outcome: Vec<usize>,
        value: f64,
    },

    #[error("setting {0:?} has zero total counts")]
    EmptySetting(Vec<usize>),

    #[error("observed Bell value {value} exceeds the bound {bound} (slack {slack:e}); data inconsistent with the declared dimensions")]
    InconsistentData { value: f64, bound: f64, slack: f64 },

    #[error("degenerate Bell-operator gap: lambda1 = lambda2 = {0}")]
    DegenerateGap(f64),

    #[error("deterministic strategy count {count} exceeds the search guard {limit}")]
    SearchSpace { count: u128, limit: u128 },

    #[error("config validation failed: {0}")]
    ConfigValidation(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("missing evidence: {0}")]
    MissingEvidence(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
