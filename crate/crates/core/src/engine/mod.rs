//! Clustering drivers: the greedy LRM-gain loop and a Louvain baseline.

mod gscarf;
mod louvain;

use std::time::Duration;

pub use gscarf::{cluster_gscarf, cluster_gscarf_observed};
pub use louvain::cluster_louvain;

use crate::graph::{ClusterSummary, NodeId};

/// Order in which singleton clusters enter the worklist.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum SeedOrder {
    #[default]
    NodeId,
    /// Must be a permutation of `0..n`.
    Permutation(Vec<NodeId>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineOptions {
    pub use_cache: bool,
    /// When off, clusters are tracked as member lists over the original
    /// graph and every neighbour scan walks the members' edges.
    pub use_fold: bool,
    pub directed: bool,
    pub seed_order: SeedOrder,
}

impl Default for EngineOptions {
    fn default() -> Self {
        Self { use_cache: true, use_fold: true, directed: false, seed_order: SeedOrder::NodeId }
    }
}

impl EngineOptions {
    pub fn directed() -> Self {
        Self { directed: true, ..Self::default() }
    }

    pub fn with_cache(mut self, on: bool) -> Self {
        self.use_cache = on;
        self
    }

    pub fn with_fold(mut self, on: bool) -> Self {
        self.use_fold = on;
        self
    }

    pub fn with_seed_order(mut self, order: SeedOrder) -> Self {
        self.seed_order = order;
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunStats {
    /// Fresh gain evaluations (cache misses when caching is on).
    pub gain_evals: u64,
    pub cache_hits: u64,
    pub cache_size: usize,
    pub folds: u64,
    /// Worklist pops for the greedy loop, local-moving passes for Louvain.
    pub iterations: u64,
    pub wall_time: Duration,
    /// `Σ L` of the returned partition.
    pub final_sigma_l: f64,
}

/// One accepted merge, reported to a [`FoldObserver`].
#[derive(Debug)]
pub struct FoldEvent<'a> {
    /// 0-based index of the merge within the run.
    pub step: u64,
    pub gain: f64,
    /// The dequeued cluster.
    pub left: ClusterSummary,
    /// Its best neighbour.
    pub right: ClusterSummary,
    /// The summary the engine holds for the merged cluster.
    pub merged: ClusterSummary,
    /// Original node ids of the merged cluster, unordered. Empty when the
    /// observer declines them.
    pub members: &'a [NodeId],
}

pub trait FoldObserver {
    fn on_fold(&mut self, event: &FoldEvent<'_>);

    /// Whether [`FoldEvent::members`] should be filled in. Collecting them
    /// costs time linear in the merged cluster's size.
    fn wants_members(&self) -> bool {
        true
    }
}

/// Observer that ignores every event.
pub(crate) struct Silent;

impl FoldObserver for Silent {
    fn on_fold(&mut self, _: &FoldEvent<'_>) {}

    fn wants_members(&self) -> bool {
        false
    }
}

impl<F: FnMut(&FoldEvent<'_>)> FoldObserver for F {
    fn on_fold(&mut self, event: &FoldEvent<'_>) {
        self(event)
    }
}
