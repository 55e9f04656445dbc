use thiserror::Error;

use crate::graph::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A malformed input line. `line` is 1-based; 0 means "not from a file".
    #[error("line {line}: {msg}")]
    Load { line: usize, msg: String },

    #[error("node {node} out of range (n = {n})")]
    Index { node: NodeId, n: usize },

    #[error("node {0} has already been folded away")]
    DeadNode(NodeId),

    #[error("cannot fold node {0} into itself")]
    SelfFold(NodeId),

    #[error("metric undefined on a graph without edges")]
    UndefinedMetric,

    #[error("coverage mismatch: {0}")]
    Coverage(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid generator parameters: {0}")]
    Spec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn load(line: usize, msg: impl Into<String>) -> Self {
        Error::Load { line, msg: msg.into() }
    }
}
