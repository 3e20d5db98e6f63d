use std::path::PathBuf;

use thiserror::Error;

/// Failures of a harness run, each tied to a process exit code.
#[derive(Debug, Error)]
pub enum HarnessError {
    /// A configuration value violates a precondition; nothing was computed.
    #[error("invalid configuration: {0}")]
    Validation(String),
    #[error("numeric failure: {0}")]
    Numeric(#[from] zeta_arclen::Error),
    #[error("consistency check failed: {0}")]
    Consistency(String),
    #[error("{action} {}: {source}", path.display())]
    Io {
        action: &'static str,
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation(_) => 2,
            Self::Numeric(_) | Self::Consistency(_) => 3,
            Self::Io { .. } => 4,
        }
    }

    pub(crate) fn io(action: &'static str, path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io { action, path: path.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
