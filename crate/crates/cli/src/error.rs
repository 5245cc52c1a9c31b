use std::fmt;

/// Failure categories, each with its own process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or parameter values.
    Usage(String),
    /// A numerical routine refused or broke down.
    Numeric(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 3,
        }
    }

    /// Prefixes the message with the grid point at which it arose.
    pub fn at(self, axis: &str, x: f64) -> CliError {
        match self {
            CliError::Usage(m) => CliError::Usage(format!("{axis} = {x}: {m}")),
            CliError::Numeric(m) => CliError::Numeric(format!("{axis} = {x}: {m}")),
            other => other,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "invalid arguments: {m}"),
            CliError::Numeric(m) => write!(f, "numeric error: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ptmetro::Error> for CliError {
    fn from(e: ptmetro::Error) -> Self {
        use ptmetro::Error::*;
        match e {
            InvalidParameter(_) | DrivenAnalytic(_) | NegativeTime(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}
