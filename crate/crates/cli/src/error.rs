use thiserror::Error;

/// Exit status 2 for anything the user can fix by changing arguments or
/// input files, 1 for failures while running.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    /// Unparseable or invalid input file.
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Runtime(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => 2,
            CliError::Runtime(_) | CliError::Io { .. } => 1,
        }
    }
}

impl From<mpsqaoa_core::Error> for CliError {
    fn from(e: mpsqaoa_core::Error) -> Self {
        match e {
            mpsqaoa_core::Error::Validation(_) | mpsqaoa_core::Error::SizeMismatch { .. } => CliError::Usage(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

pub fn read_file(path: &std::path::Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

pub fn write_file(path: &std::path::Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}
