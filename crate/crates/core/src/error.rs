use thiserror::Error;

pub type Result<T> = std::result::Result<T, QwError>;

#[derive(Debug, Error)]
pub enum QwError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("{what}: size {size} exceeds the limit {limit}")]
    SizeTooLarge {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("exact integer overflow while computing {0}")]
    Overflow(String),

    #[error("alphabet size n = {0} is not prime")]
    NotPrime(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid walk weights: {0}")]
    InvalidWeights(String),

    #[error("rho = {rho} outside [{lower}, 1]")]
    RhoOutOfRange { rho: f64, lower: f64 },

    #[error("root {re}{im:+}i has modulus deviating from 1 by {deviation:e}")]
    UnitCircleViolation { re: f64, im: f64, deviation: f64 },

    #[error("degenerate spectrum: minimum root gap {min_gap:e}")]
    DegenerateSpectrum { min_gap: f64 },

    #[error("closed-form hypotheses violated: {0}")]
    HypothesisViolated(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl QwError {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            QwError::SizeTooLarge { .. } => 3,
            QwError::Io(_) => 1,
            _ => 2,
        }
    }
}
