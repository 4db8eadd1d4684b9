use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config: {path}: {message}")]
    Validation { path: String, message: String },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    pub fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Validation {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn io(path: &std::path::Path, e: impl std::fmt::Display) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }

    /// 1 for anything the user can fix in the config, 2 for integrator failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation { .. } | CliError::Io { .. } => 1,
            CliError::Numerical(_) => 2,
        }
    }

    /// Maps a library error raised while handling `path`.
    pub fn from_core(path: &str, e: lzs_core::Error) -> Self {
        use lzs_core::Error as E;
        match e {
            E::StepSizeUnderflow { .. } | E::NonFinite { .. } | E::TooFewPeaks { .. } => {
                CliError::Numerical(e.to_string())
            }
            E::InvalidParameter { name, reason } => {
                CliError::validation(format!("{path}.{name}"), reason)
            }
            other => CliError::validation(path, other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
