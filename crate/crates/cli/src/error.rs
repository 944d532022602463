use std::fmt;
use std::process::ExitCode;

use hashchem_core::Error as CoreError;

/// Command failures, split by exit code: usage/config problems exit 2, I/O
/// failures exit 3.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Io(_) => ExitCode::from(3),
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(msg: impl Into<String>) -> Self {
        CliError::Io(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Io(msg) => f.write_str(msg),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Io(_) => CliError::Io(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
