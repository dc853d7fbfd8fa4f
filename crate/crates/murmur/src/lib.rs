//! Command-line driver for `murmur-core`: configuration files and presets,
//! parallel sweeps, and the CSV/JSON artifacts they produce.

pub mod cli;
pub mod config;
pub mod output;
pub mod parallel;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Config { path: String, message: String },

    #[error(transparent)]
    Numerical(#[from] murmur_core::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn config(path: &str, message: impl Into<String>) -> Self {
        CliError::Config {
            path: path.to_owned(),
            message: message.into(),
        }
    }

    /// 2 for anything the caller got wrong, 3 when a computation did not
    /// converge, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Numerical(e) if e.is_numerical() => 3,
            CliError::Numerical(_) => 2,
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => 1,
        }
    }
}
