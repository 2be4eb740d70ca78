use thiserror::Error;

use crate::dtree::{EdgeId, NodeId};

/// Largest number of input bits any exhaustive enumeration will accept.
pub const MAX_ENUM_N: usize = 20;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    Malformed(String),

    #[error("duplicate node id {0}")]
    DuplicateNode(NodeId),

    #[error("node {parent} references missing child {child}")]
    DanglingChild { parent: NodeId, child: NodeId },

    #[error("node {node} is not reachable from the root exactly once")]
    BadTreeShape { node: NodeId },

    #[error("repeated variable x_{var} on the path through node {node}")]
    RepeatedVariable { var: usize, node: NodeId },

    #[error("internal node {node} is missing its {which} child")]
    MissingChild { node: NodeId, which: &'static str },

    #[error("node {node} queries x_{var} but the tree has only {n} variables")]
    VariableOutOfRange { node: NodeId, var: usize, n: usize },

    #[error("input has {got} bits, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("refusing to enumerate 2^{n} inputs (limit is n = {limit})")]
    EnumerationLimit { n: usize, limit: usize },

    #[error("{what}: {actual} exceeds the cap of {limit}")]
    SizeCap {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("no weight for edge {0}")]
    MissingWeight(EdgeId),

    #[error("edge {edge} has non-positive weight {w}")]
    NonPositiveWeight { edge: EdgeId, w: f64 },

    #[error("leaf {0} has no 0/1 output label")]
    MissingOutput(NodeId),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("operation requires a non-empty AND-OR tree")]
    EmptyTree,

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_enum_limit(n: usize) -> Result<()> {
    if n > MAX_ENUM_N {
        Err(Error::EnumerationLimit {
            n,
            limit: MAX_ENUM_N,
        })
    } else {
        Ok(())
    }
}
