use std::io;

/// Failure of a subcommand, carrying its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),

    #[error("{0}")]
    Budget(String),

    /// Reference cells outside tolerance; `report` is still printed.
    #[error("{} cell(s) outside tolerance:\n  {}", failures.len(), failures.join("\n  "))]
    Acceptance { report: String, failures: Vec<String> },

    #[error("{0}")]
    Runtime(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Acceptance { .. } => 4,
            CliError::Runtime(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<covdepth_core::Error> for CliError {
    fn from(e: covdepth_core::Error) -> Self {
        use covdepth_core::Error;
        match e {
            Error::InvalidParams(_) | Error::Domain(_) | Error::QuantileOverflow { .. } => {
                CliError::Validation(e.to_string())
            }
            Error::Budget { .. } => CliError::Budget(format!("{e}; raise COVERAGE_BUDGET_STATES to allow it")),
            Error::DrawCap { .. } => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
