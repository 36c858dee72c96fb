use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("action must be non-negative, got B = {0}")]
    NegativeAction(f64),

    #[error("mixing functions are indeterminate at B = B_R = 0")]
    IndeterminateMixing,

    #[error("mixing-angle slope is undefined where s(B) = 0 (B = {0})")]
    MixingSlopeUndefined(f64),

    #[error("photon cutoff n_max = {have} is too small for |alpha0|^2 = {mean:.3}; need n_max >= {required}")]
    Truncation {
        have: usize,
        required: usize,
        mean: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("expectation of hermitian operator `{label}` has imaginary part {imag:e}")]
    NonRealExpectation { label: String, imag: f64 },

    #[error("{identity} residual {residual:e} exceeds {tolerance:e} at sector {sector}, t = {time}")]
    FlowResidual {
        identity: &'static str,
        residual: f64,
        tolerance: f64,
        sector: usize,
        time: f64,
    },

    #[error("quadrature self-check failed: {0}")]
    Quadrature(String),

    #[error("time grids differ: {0}")]
    GridMismatch(String),

    #[error("collapse fit needs at least {needed} extrema before the signal decays, found {found}")]
    InsufficientExtrema { needed: usize, found: usize },

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("no series to emit")]
    EmptySeries,

    #[error("scan needs at least 3 hbar values, got {0}")]
    ScanTooShort(usize),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
