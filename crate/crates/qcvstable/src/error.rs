use std::path::PathBuf;

use qcvstable_core::Error as NumericError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{0}")]
    Data(String),

    #[error(transparent)]
    Numeric(#[from] NumericError),

    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 2 usage, 3 data, 4 numeric failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 2,
            Error::Io { .. } | Error::Parse { .. } | Error::Data(_) => 3,
            Error::Numeric(NumericError::SampleTooSmall { .. } | NumericError::NonFiniteData) => 3,
            Error::Numeric(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            2 => "usage",
            3 => "data",
            _ => "numeric",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
