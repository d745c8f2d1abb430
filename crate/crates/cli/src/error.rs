use std::fmt;

/// Command outcome other than success, mapped onto the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Malformed or inconsistent input (exit 2).
    Usage(String),
    /// Domain error or failed verification (exit 1).
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::Failure(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) | Self::Failure(m) => f.write_str(m),
        }
    }
}

impl From<netclt::Error> for CliError {
    fn from(e: netclt::Error) -> Self {
        use netclt::Error::*;
        match e {
            Parse(_) | InvalidParameter(_) | InvalidDistribution(_) | InvalidInitialCondition(_) => {
                Self::Usage(e.to_string())
            }
            _ => Self::Failure(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Failure(format!("i/o error: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Failure(format!("csv error: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::Failure(format!("json error: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
