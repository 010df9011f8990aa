use std::io;

/// Everything that can go wrong outside the pure core.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] migc_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<String>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Stable machine-readable name.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Core(e) => e.code(),
            Error::Io { .. } => "IoError",
            Error::Json(_) => "ParseError",
            Error::Csv(_) => "CsvError",
            Error::Format(_) => "FormatError",
        }
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, Error::Core(e) if e.is_infeasible())
    }
}
