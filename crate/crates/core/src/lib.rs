//! Sublinear-time estimation of the maximum matching size.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here talks to the
//! input graph through query oracles that count every probe:
//!
//! * [`access`]: adjacency-list and adjacency-matrix oracles over a [`Graph`],
//!   plus degree recovery by binary search.
//! * [`view`], [`bipartite`], [`matrix`]: virtual graphs layered on top of an
//!   oracle (induced subgraphs, capacity-duplicated bipartite graphs and the
//!   matrix-to-list reduction graph).
//! * [`exact`]: exact reference algorithms used as ground truth.
//! * [`local`]: the lazy random-greedy matching oracle.
//! * [`sparsify`]: the explicit preprocessing matching.
//! * [`lca`]: a query-consistent local matching oracle over a union of
//!   matchings.
//! * [`estimator`]: the estimators themselves.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod access;
pub mod bipartite;
pub mod error;
pub mod estimator;
pub mod exact;
pub mod graph;
pub mod lca;
pub mod local;
pub mod matching;
pub mod matrix;
pub mod rank;
pub mod seed;
pub mod sparsify;
pub mod stats;
pub mod view;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::Error;
pub use graph::{Graph, GraphError, Vertex};
pub use matching::{BMatching, Matching};
pub use rank::RankFunction;
pub use stats::{OracleStats, StatsSnapshot};
