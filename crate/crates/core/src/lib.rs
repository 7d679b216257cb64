//! Learned vertex pruning ahead of exact maximum clique enumeration.
//!
//! The crate bundles the pieces of that pipeline:
//!
//! * [`graph`]: simple undirected graphs, I/O, and the clustering,
//!   eigencentrality, greedy coloring, and k-core kernels.
//! * [`features`]: per-vertex and per-edge feature rows.
//! * [`classifier`]: balanced training sets and a logistic model.
//! * [`sparsify`]: single- and multi-stage threshold pruning.
//! * [`mce`]: exact enumeration of all maximum cliques and accuracy metrics.
//! * [`althea`]: the degree-significance clique heuristic.
//! * [`synth`]: random graphs with planted cliques.
//! * [`strategy`]: a name-keyed registry of reduction strategies.

pub mod althea;
pub mod classifier;
pub mod error;
pub mod features;
pub mod graph;
pub mod mce;
pub mod sparsify;
pub mod strategy;
pub mod synth;

pub use error::{Error, Result};
pub use graph::Graph;
