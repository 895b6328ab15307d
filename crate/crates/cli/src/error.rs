use std::path::PathBuf;

use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("cannot read {path}: {source}", path = .path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}", path = .path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}", path = .path.display())]
    Invalid {
        path: PathBuf,
        source: gaussfid::Error,
    },

    /// The Fock oracle cannot represent the input.
    #[error("--verify unavailable: {0}")]
    Unverifiable(String),

    #[error(transparent)]
    Core(#[from] gaussfid::Error),

    /// A computed result failed its own numerical acceptance check.
    #[error("numerical check failed: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Unverifiable(_) => EXIT_USAGE,
            CliError::Parse { .. } | CliError::Invalid { .. } => EXIT_VALIDATION,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Core(e) => core_exit_code(e),
        }
    }

    /// Short machine-readable tag for json error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Parse { .. } => "parse",
            CliError::Invalid { .. } => "validation",
            CliError::Unverifiable(_) => "unverifiable",
            CliError::Numerical(_) => "numerical",
            CliError::Core(e) if e.is_numerical_guard() => "numerical",
            CliError::Core(gaussfid::Error::Domain { .. } | gaussfid::Error::Schedule(_)) => "usage",
            CliError::Core(_) => "validation",
        }
    }
}

fn core_exit_code(e: &gaussfid::Error) -> i32 {
    use gaussfid::Error as E;
    match e {
        _ if e.is_numerical_guard() => EXIT_NUMERICAL,
        E::Domain { .. } | E::Schedule(_) => EXIT_USAGE,
        E::Recipe(_) => EXIT_USAGE,
        _ => EXIT_VALIDATION,
    }
}
