use std::path::Path;
use std::process::ExitCode;

use graphwar_core::Error as CoreError;

/// Every failure the CLI reports, each with its own exit code.
///
/// | code | meaning |
/// |------|---------|
/// | 0 | success |
/// | 1 | bad arguments or configuration |
/// | 2 | graph generation failed |
/// | 3 | file system, parse or output-directory problem |
/// | 4 | a limit cut the computation short; partial results were written |
/// | 5 | the input graph does not meet a precondition (for example disconnected) |
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("generation failed: {0}")]
    Generation(CoreError),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Format(String),
    #[error("{0}")]
    Truncated(String),
    #[error("{0}")]
    Graph(CoreError),
}

impl CliError {
    pub fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }

    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Generation(_) => 2,
            CliError::Io(_) | CliError::Format(_) => 3,
            CliError::Truncated(_) => 4,
            CliError::Graph(_) => 5,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::ConnectivityRetryExhausted { .. } => CliError::Generation(e),
            CoreError::InvalidConfig(_)
            | CoreError::MalformedProfile(_)
            | CoreError::InvalidCombination(_)
            | CoreError::MissingUswParams => CliError::Usage(e.to_string()),
            CoreError::ShotLimitExceeded { .. } => CliError::Truncated(e.to_string()),
            _ => CliError::Graph(e),
        }
    }
}
