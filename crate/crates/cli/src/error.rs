use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("all {0} sweep points failed; first error: {1}")]
    AllFailed(usize, String),
    #[error("{failed} of {total} checks failed")]
    Validation { failed: usize, total: usize },
    #[error(transparent)]
    Core(#[from] slhnet::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// Stable code printed as `error[<code>]`.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Io { .. } => "io",
            CliError::AllFailed(..) => "sweep",
            CliError::Validation { .. } => "validate",
            CliError::Core(_) => "compute",
            CliError::Usage(_) => "usage",
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
