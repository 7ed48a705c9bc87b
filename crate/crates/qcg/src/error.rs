use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum QcgError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("unsupported Matrix Market header: {0}")]
    Unsupported(String),
    #[error("image {path}: {msg}")]
    Image { path: PathBuf, msg: String },
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] qcg_core::Error),
}

impl QcgError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, QcgError>;
