use std::path::PathBuf;

use thiserror::Error;

pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_INSUFFICIENT: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] overlapdim_core::Error),

    #[error("{0}")]
    Validation(String),

    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot write CSV {}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("serialization failed: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use overlapdim_core::Error as E;
        match self {
            CliError::Core(E::InsufficientSamples { .. }) => EXIT_INSUFFICIENT,
            CliError::Core(E::BracketFailure { .. } | E::SolverFailure(_)) => EXIT_INTERNAL,
            CliError::Core(_) | CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Io { .. } | CliError::Csv { .. } => EXIT_IO,
            CliError::Json(_) => EXIT_INTERNAL,
        }
    }
}
