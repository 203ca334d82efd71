use std::path::PathBuf;
use std::process::ExitCode;

use sgo_core::record::ReplayError;
use sgo_core::RecordError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    UnknownSubcommand(String),
    #[error("{0}")]
    BadFlags(String),
    #[error("{path}: {source}")]
    File { path: PathBuf, source: std::io::Error },
    #[error("{path}: malformed record\n{}", render(.errors))]
    Record { path: PathBuf, errors: Vec<RecordError> },
    #[error("{path}: {source}")]
    Replay { path: PathBuf, source: ReplayError },
    #[error("{0} mismatches")]
    Mismatches(usize),
    #[error("server: {0}")]
    Server(#[from] sgo_service::ServiceError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

fn render(errors: &[RecordError]) -> String {
    errors.iter().map(|e| format!("  {e}")).collect::<Vec<_>>().join("\n")
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::UnknownSubcommand(_) => 2,
            CliError::BadFlags(_) => 3,
            CliError::File { .. } => 4,
            CliError::Record { .. } => 5,
            CliError::Replay { .. } => 6,
            CliError::Mismatches(_) => 7,
            CliError::Server(_) => 8,
            CliError::Io(_) => 9,
        })
    }
}
