use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node id {id} out of range for graph with {node_count} nodes")]
    NodeOutOfRange { id: usize, node_count: usize },

    #[error("graph has no edges")]
    NoEdges,

    #[error("graph is empty")]
    EmptyGraph,

    #[error("no reachable pairs")]
    NoReachablePairs,

    #[error("alpha undefined: {0}")]
    AlphaUndefined(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown community id {0}")]
    UnknownCommunity(u32),

    #[error("partition covers {partition} nodes but graph has {graph}")]
    SizeMismatch { partition: usize, graph: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("partition file does not cover node {0}")]
    MissingNode(usize),

    #[error("line {line}: node {node} listed more than once")]
    DuplicateNode { line: usize, node: usize },

    #[error("reference data: {0}")]
    Reference(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
