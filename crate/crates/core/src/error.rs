use alloc::string::String;

use crate::graph::{GraphError, Vertex};

/// Errors raised by oracles, reference algorithms and estimators.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),

    #[error("vertex {vertex} is out of range (vertex count {count})")]
    InvalidVertex { vertex: Vertex, count: usize },

    /// Rejection sampling gave up; the vertex has no admissible neighbour
    /// (or the admissible fraction is far smaller than assumed).
    #[error("no admissible neighbour of {vertex} found after {attempts} probes")]
    Exhausted { vertex: Vertex, attempts: u64 },

    #[error("edges ({0}, {1}) and ({2}, {3}) received the same rank")]
    DuplicateRank(Vertex, Vertex, Vertex, Vertex),

    #[error("graph is not bipartite: edge ({0}, {1}) joins two vertices on the same side")]
    NotBipartite(Vertex, Vertex),

    #[error("invalid matching: vertex {0} is covered twice")]
    InvalidMatching(Vertex),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("fractional bound violated: {0}")]
    BoundViolation(String),
}
