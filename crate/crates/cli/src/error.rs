use std::path::PathBuf;

use contract_menu_core::Error as CoreError;
use thiserror::Error;

use crate::config::ConfigErrors;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const OTHER: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const REGIME_UNSUPPORTED: i32 = 3;
    pub const NUMERIC: i32 = 4;
    pub const AUDIT_FAILED: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigErrors),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: malformed report: {message}", path.display())]
    Report { path: PathBuf, message: String },

    #[error("config has no sweep section")]
    MissingSweep,

    #[error("{0}")]
    Solve(#[from] CoreError),

    #[error("audit failed: {0} check(s) out of tolerance")]
    AuditFailed(usize),

    #[error("csv: {0}")]
    Csv(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::MissingSweep | CliError::Report { .. } => exit::CONFIG,
            CliError::Io { .. } => exit::OTHER,
            CliError::Solve(CoreError::RegimeUnsupported { .. }) => exit::REGIME_UNSUPPORTED,
            CliError::Solve(CoreError::InvalidParameter { .. }) => exit::CONFIG,
            CliError::Solve(_) => exit::NUMERIC,
            CliError::AuditFailed(_) => exit::AUDIT_FAILED,
            CliError::Csv(_) => exit::OTHER,
        }
    }
}
