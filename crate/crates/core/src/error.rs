use thiserror::Error;

use crate::graph::Edge;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CistError {
    #[error("invalid order {value} for {what}: {reason}")]
    InvalidOrder {
        what: &'static str,
        value: usize,
        reason: &'static str,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("edge {0} is not an edge of the host graph")]
    EdgeNotInHost(Edge),

    #[error("vertex {vertex} out of range for graph of order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),

    #[error("tree set must contain at least one tree")]
    EmptyTreeSet,

    #[error("tree {tree} has {found} edges, expected {expected}")]
    EdgeCountMismatch {
        tree: usize,
        found: usize,
        expected: usize,
    },

    #[error("host graph mismatch: {0}")]
    HostMismatch(String),

    #[error("lift impossible: tree {tree} has no inner vertex in K-copy {copy}")]
    LiftImpossible { tree: usize, copy: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("appendix dataset {family} has unresolved discrepancies ({count} entries)")]
    UnresolvedDataset { family: String, count: usize },

    #[error("constructed tree set failed verification: {0}")]
    ConstructionInvalid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for CistError {
    fn from(e: std::io::Error) -> Self {
        CistError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CistError {
    fn from(e: serde_json::Error) -> Self {
        CistError::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CistError>;
