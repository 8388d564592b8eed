use thiserror::Error;

/// Input problems, as opposed to mathematical failures (which are reported,
/// not raised).
#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("{path}: {message}")]
    Fixture { path: String, message: String },

    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn fixture(path: &str, message: impl std::fmt::Display) -> Self {
        CliError::Fixture {
            path: path.into(),
            message: message.to_string(),
        }
    }
}
