use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable, malformed or physically invalid configuration (exit 2).
    #[error("configuration error: {0}")]
    Config(String),

    /// A computation failed or a law check did not pass (exit 1).
    #[error("physics check failed: {0}")]
    Physics(String),

    /// Output could not be written (exit 2).
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Physics(_) => 1,
            CliError::Config(_) | CliError::Output(_) => 2,
        }
    }

    /// Core errors met while resolving the configuration.
    pub fn from_core_config(e: qfridge_core::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<qfridge_core::Error> for CliError {
    fn from(e: qfridge_core::Error) -> Self {
        match e {
            qfridge_core::Error::InvalidParameter { .. } => CliError::Config(e.to_string()),
            other => CliError::Physics(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}
