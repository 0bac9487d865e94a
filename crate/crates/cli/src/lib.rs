//! Config-driven front end: deterministic runs, collocation or Monte Carlo
//! ensembles, and convergence comparison between ensemble bundles.

use std::path::{Path, PathBuf};

use thiserror::Error;

pub mod commands;
pub mod config;
pub mod io;

pub use commands::{cmd_compare, cmd_run, cmd_uq, Options, Outcome};
pub use config::Config;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VALIDATION: i32 = 1;
    pub const SOLVER: i32 = 2;
    pub const IO: i32 = 3;
    /// Deterministic run completed and crossed the temperature limit.
    pub const FAILED: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    Validation(String),

    #[error(transparent)]
    Core(#[from] tline_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        use tline_core::Error as E;
        match self {
            CliError::Parse(_) | CliError::Validation(_) => exit::VALIDATION,
            CliError::Io { .. } => exit::IO,
            CliError::Core(e) => match e.root() {
                E::InvalidMesh(_)
                | E::NonPositiveArea { .. }
                | E::UnknownScenario(_)
                | E::UnsupportedConversion { .. }
                | E::InvalidParameter(_)
                | E::TooManyDimensions { .. } => exit::VALIDATION,
                _ => exit::SOLVER,
            },
        }
    }
}
