use thiserror::Error;

use crate::graph::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node {node} out of range for graph with {n} nodes")]
    InvalidNode { node: NodeId, n: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
