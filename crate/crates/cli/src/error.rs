use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input from the user: config, profile, arguments.
    #[error("{context}: {source}")]
    Config { context: String, source: bornbench_core::Error },

    #[error("{0}")]
    Usage(String),

    #[error("output directory {0} already exists (use --force to overwrite)")]
    OutputExists(PathBuf),

    #[error(transparent)]
    Core(#[from] bornbench_core::Error),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },

    /// Some sweep rows failed; the summary was still written.
    #[error("{0} of {1} sweep runs failed")]
    SweepFailures(usize, usize),
}

impl CliError {
    /// 1 for usage and configuration errors, 2 for failures at run time.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Usage(_) | CliError::OutputExists(_) => 1,
            _ => 2,
        }
    }

    pub fn config(context: impl Into<String>, source: bornbench_core::Error) -> Self {
        CliError::Config { context: context.into(), source }
    }
}

pub fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
    let path = path.into();
    move |source| CliError::Io { path, source }
}

pub fn csv_err(path: impl Into<PathBuf>) -> impl FnOnce(csv::Error) -> CliError {
    let path = path.into();
    move |source| CliError::Csv { path, source }
}

/// Unreadable user-supplied input files count as usage errors.
pub fn input_err(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |e| CliError::Usage(format!("cannot read {}: {e}", path.display()))
}
