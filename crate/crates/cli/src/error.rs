use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unreadable or invalid scenario file, or a command/method mismatch.
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Solve(#[from] sbgm::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Serialize)]
struct ErrorRecord<'a> {
    error: &'a str,
    message: String,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Solve(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Solve(_) => "solve",
            CliError::Io(_) => "io",
        }
    }

    /// One-line JSON record for stderr.
    pub fn record(&self) -> String {
        serde_json::to_string(&ErrorRecord {
            error: self.kind(),
            message: self.to_string(),
        })
        .expect("error record serializes")
    }
}
