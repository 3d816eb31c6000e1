use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid interval [{begin}, {end}]: begin is after end")]
    InvalidInterval { begin: String, end: String },

    #[error("unknown node {0:?}")]
    UnknownNode(String),

    #[error("side violation: {0}")]
    SideViolation(String),

    #[error("packet #{line} ({row}) has both endpoints on the {side} side")]
    SameSidePacket { line: usize, row: String, side: String },

    #[error("node {0:?} matches no partition rule and no default side is set")]
    UnassignedNode(String),

    #[error("cannot build a stream from an empty packet sequence")]
    EmptyTrace,

    #[error("not a clique: {0}")]
    NotAClique(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("brute-force enumeration refused: {nodes} nodes exceeds the limit of {limit}")]
    TooManyNodes { nodes: usize, limit: usize },

    #[error("{path}:{line}: {message}")]
    Syntax {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{0}")]
    Parse(String),

    #[error("invalid scenario: {0}")]
    Scenario(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed stream file: {0}")]
    StreamFormat(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
