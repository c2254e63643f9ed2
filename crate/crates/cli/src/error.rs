use std::path::PathBuf;

use thiserror::Error;

use crate::catalogue::CatalogueError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Solver(#[from] qgame_core::Error),

    #[error(transparent)]
    Catalogue(#[from] CatalogueError),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {message}", path.display())]
    Input { path: PathBuf, message: String },
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        Self::Config(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 for usage and configuration problems, 2 for I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Io { .. } => 2,
            Self::Catalogue(CatalogueError::Io { .. }) => 2,
            _ => 1,
        }
    }
}
