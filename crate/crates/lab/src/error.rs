use std::io;

use thiserror::Error;

/// Failure of a subcommand, mapped onto the process exit code.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("i/o failure: {0}")]
    Io(#[from] io::Error),
    #[error("acceptance check failed: {0}")]
    Fit(String),
    #[error("numerical failure: {0}")]
    Numeric(gjms_core::Error),
}

impl LabError {
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Input(_) => 2,
            LabError::Io(_) => 3,
            LabError::Fit(_) => 4,
            LabError::Numeric(_) => 1,
        }
    }
}

impl From<gjms_core::Error> for LabError {
    fn from(e: gjms_core::Error) -> Self {
        use gjms_core::Error as E;
        match e {
            E::InvalidParameter { .. } | E::Domain { .. } | E::Support { .. } => {
                LabError::Input(e.to_string())
            }
            other => LabError::Numeric(other),
        }
    }
}

impl From<csv::Error> for LabError {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => LabError::Io(io),
            other => LabError::Io(io::Error::other(format!("{other:?}"))),
        }
    }
}

pub type LabResult<T> = Result<T, LabError>;
