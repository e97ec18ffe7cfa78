use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Gaussian state: {0}")]
    InvalidState(String),
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),
    #[error("time must be non-negative and finite, got {0}")]
    NegativeTime(f64),
    #[error("curve does not fall below {threshold} before t = {horizon}")]
    ExceedsHorizon { threshold: f64, horizon: f64 },
    #[error("curve starts at {start}, not above threshold {threshold}")]
    NotAboveThreshold { start: f64, threshold: f64 },
    #[error("no admissible point produced a finite robustness value")]
    NoOptimum,
    #[error("indicator does not change sign on [{lo}, {hi}]")]
    TransitionNotFound { lo: f64, hi: f64 },
    #[error("no positive root")]
    NoPositiveRoot,
    #[error("{0}")]
    Regime(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
