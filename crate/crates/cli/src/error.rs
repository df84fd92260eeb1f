use std::fmt;

use hypreaper::Error;

/// Failure of a command, mapped onto the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or inputs outside an operation's domain (exit 2).
    Usage(String),
    /// A verification threshold was missed (exit 1).
    Verification(String),
    /// The computation itself broke down (exit 3).
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Validation(_) => CliError::Usage(e.to_string()),
            Error::Classification(_) => CliError::Verification(e.to_string()),
            Error::Integration { .. } | Error::Degenerate(_) => CliError::Numerical(e.to_string()),
        }
    }
}
