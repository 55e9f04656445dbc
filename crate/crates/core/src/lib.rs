//! Greedy community detection by likelihood-ratio modularity, with graph
//! folding and a memoised gain cache.
//!
//! The usual flow is: load or generate a [`graph::Graph`], run
//! [`engine::cluster_gscarf`], then score the result with [`metrics`] and
//! [`evaluation`].

pub mod cache;
pub mod cli;
pub mod engine;
pub mod error;
pub mod evaluation;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod partition;
pub mod report;
pub mod synth;

pub use error::{Error, Result};
pub use graph::{Graph, GraphBuilder, NodeId, Weight};
pub use partition::Partition;
