use std::fmt;
use std::process::ExitCode;

/// A command failure, classified by the exit code it maps to.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Invalid configuration, unwritable output, or `|β| ≥ 1`. Exit 2.
    Config(String),
    /// A numerical routine failed. Exit 3.
    Integration(String),
    /// A non-timelike separation was requested. Exit 4.
    Spacelike(String),
    /// One or more verification invariants failed. Exit 1.
    Verify(Vec<String>),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Config(_) => 2,
            CliError::Integration(_) => 3,
            CliError::Spacelike(_) => 4,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }

    pub(crate) fn io(path: &std::path::Path, e: impl fmt::Display) -> Self {
        CliError::Config(format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Integration(m) => write!(f, "numerical failure: {m}"),
            CliError::Spacelike(m) => write!(f, "{m}"),
            CliError::Verify(ids) => write!(f, "failed invariants: {}", ids.join(", ")),
        }
    }
}

impl std::error::Error for CliError {}

impl From<proptime::Error> for CliError {
    fn from(e: proptime::Error) -> Self {
        match e {
            proptime::Error::UnsupportedSeparation { .. } => CliError::Spacelike(e.to_string()),
            proptime::Error::Io(_) => CliError::Config(e.to_string()),
            _ => CliError::Integration(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
