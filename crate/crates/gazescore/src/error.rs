use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Process exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const IO: i32 = 3;
    pub const SCHEMA: i32 = 4;
    pub const CONFIG: i32 = 5;
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}:{line}: field `{field}`: {message}", path.display())]
    Schema { path: PathBuf, line: u64, field: String, message: String },
    /// Inputs that parse but cannot be analysed together.
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Config(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Error {
        Error::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => exit::USAGE,
            Error::Io { .. } => exit::IO,
            Error::Schema { .. } | Error::Data(_) => exit::SCHEMA,
            Error::Config(_) => exit::CONFIG,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
