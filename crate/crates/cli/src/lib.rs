//! Front end for loxodrome scenes: configuration files, surface meshes,
//! polyline export and verification reports.

use std::path::{Path, PathBuf};

pub mod commands;
pub mod config;
pub mod export;
pub mod figures;
pub mod report;
pub mod scene;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("verification failed: {failed} of {total} checks outside tolerance")]
    VerificationFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// Process exit status: 1 failed verification, 2 bad input, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerificationFailed { .. } => 1,
            CliError::Invalid(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}
