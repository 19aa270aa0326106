use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{}: {msg}", path.display())]
    Io { path: PathBuf, msg: String },
    #[error(transparent)]
    Core(#[from] primint_core::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, msg: impl ToString) -> Self {
        CliError::Io { path: path.into(), msg: msg.to_string() }
    }

    /// Process exit status: 64 for usage errors, 66 for unreadable or
    /// malformed files, 1 for anything raised by the numerics.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Io { .. } => 66,
            CliError::Core(_) => 1,
        }
    }
}
