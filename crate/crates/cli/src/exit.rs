//! Process exit codes and the mapping from library errors onto them.

use duomode_core::Error;
use thiserror::Error;

pub const OK: i32 = 0;
pub const VERIFICATION_FAILED: i32 = 1;
pub const UNSTABLE: i32 = 2;
pub const UNPHYSICAL: i32 = 3;
pub const IO: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Unstable(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Verification(_) => VERIFICATION_FAILED,
            CliError::Unstable(_) => UNSTABLE,
            CliError::Input(_) => UNPHYSICAL,
            CliError::Io(_) => IO,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Unstable { .. } | Error::NotHurwitz => CliError::Unstable(e.to_string()),
            Error::InvalidParameter { .. }
            | Error::UnphysicalReservoir { .. }
            | Error::StepSize { .. }
            | Error::SdeConfig(_) => CliError::Input(e.to_string()),
            Error::Singular { .. }
            | Error::DegeneratePopulation { .. }
            | Error::NotPositiveSemidefinite { .. }
            | Error::Divergence { .. } => CliError::Verification(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
