use std::io;
use std::path::PathBuf;

use crate::generate::Violation;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}:{line}: {msg}", path.display())]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("configuration: {0}")]
    Config(String),
    #[error("initial curve rejected: {}", list(.0))]
    Validation(Vec<Violation>),
    #[error("initial curve: {0}")]
    Generation(elastica_core::Error),
    #[error("malformed {}: {msg}", path.display())]
    Format { path: PathBuf, msg: String },
    #[error("{0} diagnostic check(s) failed")]
    Diagnostics(usize),
    #[error(transparent)]
    Numerical(#[from] elastica_core::Error),
}

fn list(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }

    /// Process exit code: 2 for bad input or failed validation, 3 for
    /// numerical failures, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Parse { .. }
            | CliError::Config(_)
            | CliError::Validation(_)
            | CliError::Generation(_)
            | CliError::Format { .. } => 2,
            CliError::Diagnostics(_) | CliError::Numerical(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
