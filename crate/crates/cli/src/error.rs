use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{}: {1}", .0.display())]
    Io(PathBuf, std::io::Error),

    #[error("{}: {1}", .0.display())]
    Input(PathBuf, clifford_orlicz::Error),

    #[error(transparent)]
    Numeric(#[from] clifford_orlicz::Error),
}

impl CliError {
    /// 1 usage, 2 input, 3 numerical non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numeric(clifford_orlicz::Error::Convergence { .. }) => 3,
            _ => 2,
        }
    }
}
