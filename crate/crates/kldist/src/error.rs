use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] kldist_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: token id {id} out of range for d={d}")]
    IdOutOfRange { line: usize, id: usize, d: usize },
    #[error("empty file")]
    EmptyFile,
    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// 2 for bad arguments, 1 for bad data or failed IO.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 2,
            Error::Core(kldist_core::Error::IncompatibleLoss(_) | kldist_core::Error::InvalidParameter { .. }) => 2,
            _ => 1,
        }
    }
}
