use std::path::PathBuf;

use robust_ensembles::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// 2: bad input or configuration, 3: numerical failure, 4: I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io { .. } => 4,
            CliError::Core(e) => match e {
                CoreError::InvalidParams(_)
                | CoreError::InvalidInput(_)
                | CoreError::InvalidEnsemble(_)
                | CoreError::InvalidState(_)
                | CoreError::NegativeTime(_) => 2,
                CoreError::ExceedsHorizon { .. }
                | CoreError::NotAboveThreshold { .. }
                | CoreError::NoOptimum
                | CoreError::TransitionNotFound { .. }
                | CoreError::NoPositiveRoot
                | CoreError::Regime(_) => 3,
            },
        }
    }
}
