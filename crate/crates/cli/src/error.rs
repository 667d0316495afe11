//! Command-level errors mapped onto process exit codes.

use std::fmt;

/// Exit-code convention: 0 success, 1 usage error, 2 data error,
/// 3 every requested run failed.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad config-file keys, or invalid parameter values.
    Usage(String),
    /// Unreadable/unwritable files or malformed dataset content.
    Data(String),
    /// The run grid executed but not a single run produced a result.
    AllRunsFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::AllRunsFailed(_) => 3,
        }
    }

    /// Wrap a core configuration error as a usage error.
    pub fn usage(err: impl fmt::Display) -> Self {
        CliError::Usage(err.to_string())
    }

    /// Wrap a core I/O or content error as a data error.
    pub fn data(err: impl fmt::Display) -> Self {
        CliError::Data(err.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Data(msg) => write!(f, "{msg}"),
            CliError::AllRunsFailed(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}
