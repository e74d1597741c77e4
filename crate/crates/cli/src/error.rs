use std::path::PathBuf;

use stp_core::Error;

pub const EXIT_SHAPE: u8 = 2;
pub const EXIT_PARSE: u8 = 3;
pub const EXIT_NUMERIC: u8 = 4;
pub const EXIT_UNSUPPORTED: u8 = 5;
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{}: {source}", path.display())]
    File { path: PathBuf, source: Error },

    #[error(transparent)]
    Core(#[from] Error),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => EXIT_PARSE,
            CliError::Usage(_) => EXIT_USAGE,
            CliError::File { source, .. } | CliError::Core(source) => core_exit_code(source),
        }
    }
}

fn core_exit_code(e: &Error) -> u8 {
    match e {
        e if e.is_shape_error() => EXIT_SHAPE,
        Error::Singular | Error::NoConvergence(_) => EXIT_NUMERIC,
        Error::Unsupported(_) => EXIT_UNSUPPORTED,
        _ => EXIT_PARSE,
    }
}
