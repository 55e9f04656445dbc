//! Greedy LRM-gain clustering over a FIFO worklist.
//!
//! Every node starts as a singleton in the worklist. A dequeued cluster scans
//! its neighbour clusters, resolves each merge gain (through the gain cache
//! when enabled) and merges with the best neighbour if that gain is strictly
//! positive; the merged cluster goes to the back of the queue. Otherwise the
//! cluster is retired for good, even if its neighbourhood changes later.
//!
//! Ties on equal gain go to the neighbour whose smallest member id is lowest.
//! That identity does not depend on how clusters are stored, so the folding
//! and non-folding backends make identical decisions.

use std::collections::VecDeque;
use std::time::Instant;

use rustc_hash::FxHashMap;

use super::{EngineOptions, FoldEvent, FoldObserver, RunStats, SeedOrder, Silent};
use crate::cache::GainCache;
use crate::error::{Error, Result};
use crate::graph::{ClusterSummary, Graph, NodeId, Weight};
use crate::metrics::{summary_log_lrm, DirectedTuple, GainKey, StructTuple};
use crate::partition::Partition;

/// Clusters `g` by greedy LRM-gain maximisation.
pub fn cluster_gscarf(g: &Graph, opts: &EngineOptions) -> Result<(Partition, RunStats)> {
    cluster_gscarf_observed(g, opts, &mut Silent)
}

/// [`cluster_gscarf`], reporting every accepted merge to `observer`.
pub fn cluster_gscarf_observed(
    g: &Graph,
    opts: &EngineOptions,
    observer: &mut dyn FoldObserver,
) -> Result<(Partition, RunStats)> {
    if opts.directed != g.is_directed() {
        return Err(Error::Config(format!(
            "directed option is {} but the graph is {}",
            opts.directed,
            if g.is_directed() { "directed" } else { "undirected" }
        )));
    }
    if g.alive_count() != g.n() {
        return Err(Error::Config("graph has folded nodes; cluster a fresh graph".into()));
    }
    let order = seed_order(g.n(), &opts.seed_order)?;
    let start = Instant::now();
    let (partition, mut stats) = match (opts.directed, opts.use_fold) {
        (false, true) => run::<StructTuple, _>(FoldBackend::new(g), g, &order, opts, observer),
        (false, false) => run::<StructTuple, _>(ScanBackend::new(g), g, &order, opts, observer),
        (true, true) => run::<DirectedTuple, _>(FoldBackend::new(g), g, &order, opts, observer),
        (true, false) => run::<DirectedTuple, _>(ScanBackend::new(g), g, &order, opts, observer),
    };
    stats.wall_time = start.elapsed();
    Ok((partition, stats))
}

fn seed_order(n: usize, order: &SeedOrder) -> Result<Vec<NodeId>> {
    match order {
        SeedOrder::NodeId => Ok((0..n as NodeId).collect()),
        SeedOrder::Permutation(p) => {
            let mut seen = vec![false; n];
            for &v in p {
                match seen.get_mut(v as usize) {
                    Some(s) if !*s => *s = true,
                    _ => return Err(Error::Config(format!("seed order is not a permutation (node {v})"))),
                }
            }
            if p.len() != n {
                return Err(Error::Config("seed order is not a permutation of all nodes".into()));
            }
            Ok(p.clone())
        }
    }
}

const NIL: NodeId = NodeId::MAX;

/// Member lists as chains through a shared `next` array, so joining two
/// clusters is O(1) and allocation free.
struct Members {
    head: Vec<NodeId>,
    tail: Vec<NodeId>,
    next: Vec<NodeId>,
    len: Vec<u32>,
}

impl Members {
    fn singletons(n: usize) -> Self {
        Self {
            head: (0..n as NodeId).collect(),
            tail: (0..n as NodeId).collect(),
            next: vec![NIL; n],
            len: vec![1; n],
        }
    }

    fn len(&self, c: NodeId) -> u32 {
        self.len[c as usize]
    }

    fn iter(&self, c: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        let mut v = self.head[c as usize];
        std::iter::from_fn(move || {
            (v != NIL).then(|| {
                let cur = v;
                v = self.next[v as usize];
                cur
            })
        })
    }

    /// Moves the members of `from` to the end of `into`.
    fn append(&mut self, into: NodeId, from: NodeId) {
        let (i, f) = (into as usize, from as usize);
        self.next[self.tail[i] as usize] = self.head[f];
        self.tail[i] = self.tail[f];
        self.len[i] += self.len[f];
        self.head[f] = NIL;
        self.tail[f] = NIL;
        self.len[f] = 0;
    }
}

/// Cluster storage. Slots are node ids of the original graph; a merged
/// cluster lives in the slot returned by `merge`.
trait Backend {
    fn summary(&self, c: NodeId) -> ClusterSummary;

    /// Appends `(neighbour slot, link)` for every cluster adjacent to `c`, in
    /// the key's link units.
    fn neighbors(&mut self, c: NodeId, members: &Members, out: &mut Vec<(NodeId, Weight)>);

    /// Merges `b` into `a` (or the reverse) and returns the surviving slot.
    fn merge(&mut self, a: NodeId, b: NodeId, members: &Members, link_stubs: Weight) -> NodeId;
}

struct FoldBackend {
    graph: Graph,
}

impl FoldBackend {
    fn new(g: &Graph) -> Self {
        Self { graph: g.clone_unlabeled() }
    }
}

impl Backend for FoldBackend {
    fn summary(&self, c: NodeId) -> ClusterSummary {
        self.graph.summary(c)
    }

    fn neighbors(&mut self, c: NodeId, _: &Members, out: &mut Vec<(NodeId, Weight)>) {
        let outs = self.graph.out_map(c);
        match self.graph.in_map(c) {
            None => out.extend(outs.iter().map(|(&k, &w)| (k, w))),
            Some(ins) => {
                out.extend(outs.iter().map(|(&k, &w)| (k, w + ins.get(&k).copied().unwrap_or(0))));
                out.extend(ins.iter().filter(|(k, _)| !outs.contains_key(k)).map(|(&k, &w)| (k, w)));
            }
        }
    }

    fn merge(&mut self, a: NodeId, b: NodeId, _: &Members, _: Weight) -> NodeId {
        self.graph.fold(a, b).expect("engine folds alive, distinct nodes")
    }
}

/// Merges without contracting: clusters are member lists over the original
/// graph and adjacency is re-aggregated on every scan.
struct ScanBackend<'g> {
    graph: &'g Graph,
    owner: Vec<NodeId>,
    summaries: Vec<ClusterSummary>,
    scratch: FxHashMap<NodeId, Weight>,
}

impl<'g> ScanBackend<'g> {
    fn new(g: &'g Graph) -> Self {
        Self {
            graph: g,
            owner: (0..g.n() as NodeId).collect(),
            summaries: (0..g.n() as NodeId).map(|v| g.summary(v)).collect(),
            scratch: FxHashMap::default(),
        }
    }
}

impl Backend for ScanBackend<'_> {
    fn summary(&self, c: NodeId) -> ClusterSummary {
        self.summaries[c as usize]
    }

    fn neighbors(&mut self, c: NodeId, members: &Members, out: &mut Vec<(NodeId, Weight)>) {
        self.scratch.clear();
        for v in members.iter(c) {
            let ins = self.graph.in_map(v).into_iter().flatten();
            for (&u, &w) in self.graph.out_map(v).iter().chain(ins) {
                let cu = self.owner[u as usize];
                if cu != c {
                    *self.scratch.entry(cu).or_insert(0) += w;
                }
            }
        }
        out.extend(self.scratch.iter().map(|(&k, &w)| (k, w)));
    }

    fn merge(&mut self, a: NodeId, b: NodeId, members: &Members, link_stubs: Weight) -> NodeId {
        let (keep, gone) = if members.len(a) >= members.len(b) { (a, b) } else { (b, a) };
        for v in members.iter(gone) {
            self.owner[v as usize] = keep;
        }
        let merged = self.summaries[a as usize].merge(self.summaries[b as usize], link_stubs);
        self.summaries[keep as usize] = merged;
        self.summaries[gone as usize] = ClusterSummary::default();
        keep
    }
}

#[derive(Clone, Copy)]
struct Slot {
    summary: ClusterSummary,
    rep: NodeId,
}

fn run<K: GainKey, B: Backend>(
    mut backend: B,
    g: &Graph,
    order: &[NodeId],
    opts: &EngineOptions,
    observer: &mut dyn FoldObserver,
) -> (Partition, RunStats) {
    let n = g.n();
    let total = g.total_weight();
    let mut stats = RunStats::default();
    if n == 0 {
        return (Partition::singletons(0), stats);
    }

    let mut members = Members::singletons(n);
    let wants_members = observer.wants_members();
    let mut event_members: Vec<NodeId> = Vec::new();
    // Summary and tie-break identity (smallest original member id) side by
    // side, so scoring a neighbour touches one cache line.
    let mut slots: Vec<Slot> = (0..n as NodeId).map(|v| Slot { summary: backend.summary(v), rep: v }).collect();
    let mut alive = vec![true; n];

    // Worklist entries carry a stamp so that removals are O(1): an entry is
    // live only while its stamp matches and the slot is still queued.
    let mut stamp = vec![0u32; n];
    let mut queued = vec![true; n];
    let mut queue: VecDeque<(NodeId, u32)> = order.iter().map(|&v| (v, 0)).collect();

    let mut cache = (opts.use_cache && total > 0).then(|| GainCache::<K>::new(total));
    let mut lookups = 0u64;
    let mut nbrs: Vec<(NodeId, Weight)> = Vec::new();

    while let Some((c, st)) = queue.pop_front() {
        if stamp[c as usize] != st || !queued[c as usize] {
            continue;
        }
        queued[c as usize] = false;
        stats.iterations += 1;

        nbrs.clear();
        backend.neighbors(c, &members, &mut nbrs);
        let si = slots[c as usize].summary;

        // (gain, rep, slot, link)
        let mut best: Option<(f64, NodeId, NodeId, Weight)> = None;
        for &(j, link) in &nbrs {
            let slot = &slots[j as usize];
            let key = K::from_parts(si, slot.summary, link);
            lookups += 1;
            let gain = match cache.as_mut() {
                Some(cache) => cache.lookup_or_compute(key),
                None => key.lrm_gain(total),
            };
            let r = slot.rep;
            let better = match best {
                None => true,
                Some((bg, br, _, _)) => gain > bg || (gain == bg && r < br),
            };
            if better {
                best = Some((gain, r, j, link));
            }
        }

        let Some((gain, _, j, link)) = best.filter(|b| b.0 > 0.0) else {
            continue; // retired
        };
        queued[j as usize] = false;
        let sj = slots[j as usize].summary;
        let link_stubs = link * K::STUBS_PER_LINK;
        let x = backend.merge(c, j, &members, link_stubs);
        let other = if x == c { j } else { c };

        members.append(x, other);
        slots[x as usize] = Slot {
            summary: si.merge(sj, link_stubs),
            rep: slots[c as usize].rep.min(slots[j as usize].rep),
        };
        debug_assert_eq!(slots[x as usize].summary, backend.summary(x));
        alive[other as usize] = false;

        stamp[x as usize] = stamp[x as usize].wrapping_add(1);
        queued[x as usize] = true;
        queue.push_back((x, stamp[x as usize]));

        event_members.clear();
        if wants_members {
            event_members.extend(members.iter(x));
        }
        observer.on_fold(&FoldEvent {
            step: stats.folds,
            gain,
            left: si,
            right: sj,
            merged: backend.summary(x),
            members: &event_members,
        });
        stats.folds += 1;
    }

    let mut labels = vec![0 as NodeId; n];
    let mut sigma = 0.0;
    for c in (0..n).filter(|&c| alive[c]) {
        for v in members.iter(c as NodeId) {
            labels[v as usize] = slots[c].rep;
        }
        if total > 0 {
            sigma += summary_log_lrm(&slots[c].summary, total);
        }
    }
    stats.final_sigma_l = sigma;
    match &cache {
        Some(cache) => {
            let s = cache.stats();
            stats.gain_evals = s.misses;
            stats.cache_hits = s.hits;
            stats.cache_size = s.size;
        }
        None => stats.gain_evals = lookups,
    }
    (Partition::from_labels(&labels), stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::log_lrm;

    fn triangle() -> Graph {
        Graph::from_index_edges(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)], false)
    }

    /// Two triangles {0,1,2} and {3,4,5} bridged by 2–3, padded with a
    /// path so the total is large enough for merges to pay off.
    fn bridged_triangles() -> Graph {
        let mut edges = vec![(0, 1, 1), (1, 2, 1), (0, 2, 1), (3, 4, 1), (4, 5, 1), (3, 5, 1), (2, 3, 1)];
        for v in 6..60 {
            edges.push((v, v + 1, 1));
        }
        Graph::from_index_edges(61, &edges, false)
    }

    #[test]
    fn triangle_stays_singletons() {
        let (p, stats) = cluster_gscarf(&triangle(), &EngineOptions::default()).unwrap();
        assert_eq!(p, Partition::singletons(3));
        assert_eq!(stats.folds, 0);
        assert_eq!(stats.iterations, 3);
        assert!((stats.final_sigma_l - 3.0 * log_lrm(0, 2, 6)).abs() < 1e-15);
    }

    #[test]
    fn empty_and_edgeless_graphs() {
        let g = Graph::from_index_edges(0, &[], false);
        let (p, _) = cluster_gscarf(&g, &EngineOptions::default()).unwrap();
        assert!(p.is_empty());
        let g = Graph::from_index_edges(4, &[], false);
        let (p, stats) = cluster_gscarf(&g, &EngineOptions::default()).unwrap();
        assert_eq!(p.cluster_count(), 4);
        assert_eq!(stats.gain_evals, 0);
    }

    #[test]
    fn variants_agree_on_small_graph() {
        let g = bridged_triangles();
        let base = cluster_gscarf(&g, &EngineOptions::default()).unwrap();
        for opts in [
            EngineOptions::default().with_cache(false),
            EngineOptions::default().with_fold(false),
            EngineOptions::default().with_cache(false).with_fold(false),
        ] {
            let (p, s) = cluster_gscarf(&g, &opts).unwrap();
            assert_eq!(p, base.0, "{opts:?}");
            assert_eq!(s.folds, base.1.folds);
            assert_eq!(s.final_sigma_l.to_bits(), base.1.final_sigma_l.to_bits());
        }
        assert!(base.1.folds > 0);
        assert!(base.1.cache_hits > 0);
    }

    #[test]
    fn stats_accounting() {
        let g = bridged_triangles();
        let (_, cached) = cluster_gscarf(&g, &EngineOptions::default()).unwrap();
        let (_, fresh) = cluster_gscarf(&g, &EngineOptions::default().with_cache(false)).unwrap();
        assert_eq!(cached.gain_evals + cached.cache_hits, fresh.gain_evals);
        assert_eq!(cached.gain_evals as usize, cached.cache_size);
        assert!(cached.folds < g.n() as u64);
    }

    #[test]
    fn fold_events_increase_objective() {
        let g = bridged_triangles();
        let t = g.total_weight();
        let mut sigma = (0..g.n() as NodeId).map(|v| summary_log_lrm(&g.summary(v), t)).sum::<f64>();
        let mut events = 0;
        let (_, stats) = cluster_gscarf_observed(&g, &EngineOptions::default(), &mut |ev: &FoldEvent<'_>| {
            let delta = summary_log_lrm(&ev.merged, t)
                - summary_log_lrm(&ev.left, t)
                - summary_log_lrm(&ev.right, t);
            assert!(ev.gain > 0.0);
            assert!((delta - ev.gain).abs() < 1e-12);
            sigma += delta;
            events += 1;
        })
        .unwrap();
        assert_eq!(events, stats.folds);
        assert!((sigma - stats.final_sigma_l).abs() < 1e-12);
    }

    #[test]
    fn deterministic_stats() {
        let g = bridged_triangles();
        let (p1, mut s1) = cluster_gscarf(&g, &EngineOptions::default()).unwrap();
        let (p2, mut s2) = cluster_gscarf(&g, &EngineOptions::default()).unwrap();
        s1.wall_time = Default::default();
        s2.wall_time = Default::default();
        assert_eq!(p1, p2);
        assert_eq!(s1, s2);
    }

    #[test]
    fn rejects_orientation_mismatch_and_bad_order() {
        let g = triangle();
        assert!(matches!(cluster_gscarf(&g, &EngineOptions::directed()), Err(Error::Config(_))));
        let d = g.to_symmetric_digraph();
        assert!(matches!(cluster_gscarf(&d, &EngineOptions::default()), Err(Error::Config(_))));
        let bad = EngineOptions::default().with_seed_order(SeedOrder::Permutation(vec![0, 0, 1]));
        assert!(matches!(cluster_gscarf(&g, &bad), Err(Error::Config(_))));
        let ok = EngineOptions::default().with_seed_order(SeedOrder::Permutation(vec![2, 0, 1]));
        assert!(cluster_gscarf(&g, &ok).is_ok());
    }

    #[test]
    fn single_arc_digraph() {
        let g = Graph::from_edges([("u", "v", 1)], true).unwrap();
        let (p, stats) = cluster_gscarf(&g, &EngineOptions::directed().with_cache(false)).unwrap();
        // m = 1: the merged cluster has tp = ep = 1 and ΔQ = 1 − 1, so ΔL = 0
        assert_eq!(stats.gain_evals, 2);
        assert_eq!(p.cluster_count(), 2);
    }

    #[test]
    fn symmetric_digraph_matches_undirected() {
        let g = bridged_triangles();
        let (pu, su) = cluster_gscarf(&g, &EngineOptions::default()).unwrap();
        let (pd, sd) = cluster_gscarf(&g.to_symmetric_digraph(), &EngineOptions::directed()).unwrap();
        assert_eq!(pu, pd);
        assert_eq!(su.folds, sd.folds);
    }
}
