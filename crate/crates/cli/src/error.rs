//! Command line error type and its mapping onto process exit codes.

use std::fmt;

use gle_core::Error as CoreError;

/// Exit code for usage errors: bad flags, impossible requests.
pub const EXIT_USAGE: i32 = 1;
/// Exit code for validation failures: unphysical states, malformed files,
/// violated preconditions.
pub const EXIT_VALIDATION: i32 = 2;
/// Exit code for numerical failures: singular conditioning, non-convergence.
pub const EXIT_NUMERICAL: i32 = 3;

/// Failure modes of a command invocation, grouped by exit code.
#[derive(Debug)]
pub enum CliError {
    /// The request itself was malformed or outside documented limits.
    Usage(String),
    /// The input data failed a check that well-formed data would pass.
    Validation(String),
    /// The computation broke down on admissible input.
    Numerical(String),
    /// The operating system refused a file operation.
    Io(String),
}

impl CliError {
    /// The process exit code this error maps to.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Validation(msg) => write!(f, "validation error: {msg}"),
            CliError::Numerical(msg) => write!(f, "numerical error: {msg}"),
            CliError::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        match err {
            CoreError::SingularConditioning | CoreError::Numerical(_) => {
                CliError::Numerical(err.to_string())
            }
            CoreError::OracleTooLarge(_) => CliError::Usage(err.to_string()),
            _ => CliError::Validation(err.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
