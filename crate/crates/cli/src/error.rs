use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or malformed input files, bad flags or config values.
    #[error("{0}")]
    Input(String),

    /// A numerical routine failed on otherwise valid input.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// No ensemble member could be used.
    #[error("ensemble failed: {0}")]
    Ensemble(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Io { .. } => 1,
            CliError::Numerical(_) => 2,
            CliError::Ensemble(_) => 3,
        }
    }

    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
