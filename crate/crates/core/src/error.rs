//! Error type shared by every module of the crate.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, DgcnError>;

#[derive(Debug, Error)]
pub enum DgcnError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("index out of bounds: {0}")]
    Bounds(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("node {node} has zero degree; cannot normalize")]
    IsolatedNode { node: usize },

    #[error("undefined metric: {0}")]
    UndefinedMetric(String),

    #[error("unlabeled nodes in diagnostic edge set: {nodes:?}")]
    Unlabeled { nodes: Vec<usize> },

    #[error("protocol error: {0}")]
    Protocol(String),

    #[error("training diverged at epoch {epoch}: loss = {loss}")]
    Divergence { epoch: usize, loss: f64 },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl DgcnError {
    /// Process exit code: 1 usage, 2 domain/data, 3 internal invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            DgcnError::Usage(_) => 1,
            DgcnError::Internal(_) => 3,
            _ => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        DgcnError::Io {
            path: path.into(),
            source,
        }
    }
}
