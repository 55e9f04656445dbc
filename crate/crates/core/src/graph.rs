//! Weighted graph with in-place subgraph folding.
//!
//! Undirected graphs keep one symmetric adjacency map per node. Internal edge
//! weight is stored as a self-loop counted in half-edge stubs: folding `i` and
//! `j` gives the new node `2·W(i,j) + W(i,i) + W(j,j)`, and the self-loop is
//! counted once in the node's degree. With that convention the total stub
//! count `2m` never changes under folding and a node's self-loop is exactly
//! the internal stub weight `e` of the cluster it represents.
//!
//! Directed graphs keep separate out- and in-adjacency maps. There the
//! self-loop counts internal arcs once, and the normalising total is the arc
//! weight `m`.
//!
//! Folded-away nodes are tombstoned so ids stay stable for the lifetime of a
//! clustering run; [`Graph::compact`] renumbers the survivors.

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};

pub type NodeId = u32;
/// Edge multiplicity. Integer so structural keys compare exactly.
pub type Weight = u64;

pub(crate) type AdjMap = FxHashMap<NodeId, Weight>;

/// What to do with `u u` lines in the input.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SelfLoops {
    #[default]
    Reject,
    /// Fold the loop into the node's internal weight.
    Keep,
}

/// Dense id <-> external label mapping.
#[derive(Clone, Debug, Default)]
pub struct LabelIndex {
    labels: Vec<String>,
    ids: FxHashMap<String, NodeId>,
}

impl LabelIndex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Labels `"0"`, `"1"`, ... for generated graphs.
    pub fn numbered(n: usize) -> Self {
        let mut idx = Self::new();
        for i in 0..n {
            idx.intern(&i.to_string());
        }
        idx
    }

    pub fn intern(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.ids.get(label) {
            return id;
        }
        let id = self.labels.len() as NodeId;
        self.labels.push(label.to_owned());
        self.ids.insert(label.to_owned(), id);
        id
    }

    pub fn get(&self, label: &str) -> Option<NodeId> {
        self.ids.get(label).copied()
    }

    pub fn label(&self, id: NodeId) -> &str {
        &self.labels[id as usize]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.labels.iter().map(String::as_str)
    }
}

/// Structural scalars of a cluster (or of a folded node).
///
/// `e` is the internal weight: half-edge stubs for undirected graphs, arcs for
/// directed ones. In undirected mode `a_in == a_out == a`, the total degree.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ClusterSummary {
    pub e: Weight,
    pub a_in: Weight,
    pub a_out: Weight,
}

impl ClusterSummary {
    pub fn undirected(e: Weight, a: Weight) -> Self {
        Self { e, a_in: a, a_out: a }
    }

    pub fn directed(e: Weight, a_in: Weight, a_out: Weight) -> Self {
        Self { e, a_in, a_out }
    }

    /// Total degree of an undirected cluster.
    pub fn a(&self) -> Weight {
        self.a_out
    }

    /// Summary of the union of two clusters joined by `link_stubs` internal
    /// weight (`2·W(i,j)` undirected, `W(i→j) + W(j→i)` directed).
    pub fn merge(self, other: Self, link_stubs: Weight) -> Self {
        Self {
            e: self.e + other.e + link_stubs,
            a_in: self.a_in + other.a_in,
            a_out: self.a_out + other.a_out,
        }
    }
}

/// Incremental graph construction from labelled edges.
#[derive(Debug)]
pub struct GraphBuilder {
    directed: bool,
    self_loops: SelfLoops,
    labels: LabelIndex,
    out_adj: Vec<AdjMap>,
    in_adj: Vec<AdjMap>,
    self_loop: Vec<Weight>,
}

impl GraphBuilder {
    pub fn new(directed: bool) -> Self {
        Self {
            directed,
            self_loops: SelfLoops::Reject,
            labels: LabelIndex::new(),
            out_adj: Vec::new(),
            in_adj: Vec::new(),
            self_loop: Vec::new(),
        }
    }

    pub fn self_loops(mut self, policy: SelfLoops) -> Self {
        self.self_loops = policy;
        self
    }

    pub fn add_node(&mut self, label: &str) -> NodeId {
        let id = self.labels.intern(label);
        if id as usize == self.out_adj.len() {
            self.out_adj.push(AdjMap::default());
            self.self_loop.push(0);
            if self.directed {
                self.in_adj.push(AdjMap::default());
            }
        }
        id
    }

    /// Adds `w` to the edge `u–v` (the arc `u→v` when directed). Repeated
    /// edges accumulate.
    pub fn add_edge(&mut self, u: &str, v: &str, w: Weight) -> Result<()> {
        if w == 0 {
            return Err(Error::load(0, "edge weight must be a positive integer"));
        }
        if u == v && self.self_loops == SelfLoops::Reject {
            return Err(Error::load(0, format!("self-loop on `{u}` not allowed")));
        }
        let u = self.add_node(u);
        let v = self.add_node(v);
        self.add_index_edge(u, v, w);
        Ok(())
    }

    fn add_index_edge(&mut self, u: NodeId, v: NodeId, w: Weight) {
        if u == v {
            // An undirected loop carries two stubs per unit of weight.
            self.self_loop[u as usize] += if self.directed { w } else { 2 * w };
            return;
        }
        *self.out_adj[u as usize].entry(v).or_insert(0) += w;
        if self.directed {
            *self.in_adj[v as usize].entry(u).or_insert(0) += w;
        } else {
            *self.out_adj[v as usize].entry(u).or_insert(0) += w;
        }
    }

    pub fn build(self) -> Graph {
        let n = self.out_adj.len();
        let out_deg: Vec<Weight> = (0..n)
            .map(|v| self.out_adj[v].values().sum::<Weight>() + self.self_loop[v])
            .collect();
        let in_deg: Vec<Weight> = if self.directed {
            (0..n)
                .map(|v| self.in_adj[v].values().sum::<Weight>() + self.self_loop[v])
                .collect()
        } else {
            Vec::new()
        };
        let total = out_deg.iter().sum();
        Graph {
            directed: self.directed,
            labels: self.labels,
            out_adj: self.out_adj,
            in_adj: self.in_adj,
            self_loop: self.self_loop,
            out_deg,
            in_deg,
            alive: vec![true; n],
            alive_count: n,
            total,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Graph {
    directed: bool,
    labels: LabelIndex,
    /// Undirected: the (symmetric) adjacency. Directed: out-arcs.
    out_adj: Vec<AdjMap>,
    /// Directed only.
    in_adj: Vec<AdjMap>,
    self_loop: Vec<Weight>,
    /// Undirected: degree. Directed: out-degree.
    out_deg: Vec<Weight>,
    /// Directed only.
    in_deg: Vec<Weight>,
    alive: Vec<bool>,
    alive_count: usize,
    total: Weight,
}

impl Graph {
    /// Builds a graph from labelled edges. Duplicate edges have their weights
    /// summed; self-loops are rejected.
    pub fn from_edges<'a, I>(edges: I, directed: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str, Weight)>,
    {
        let mut b = GraphBuilder::new(directed);
        for (line, (u, v, w)) in edges.into_iter().enumerate() {
            b.add_edge(u, v, w).map_err(|e| relocate(e, line + 1))?;
        }
        Ok(b.build())
    }

    /// Builds a graph over nodes `0..n` labelled by their index.
    pub fn from_index_edges(n: usize, edges: &[(NodeId, NodeId, Weight)], directed: bool) -> Self {
        let mut b = GraphBuilder::new(directed).self_loops(SelfLoops::Keep);
        for i in 0..n {
            b.add_node(&i.to_string());
        }
        for &(u, v, w) in edges {
            assert!((u as usize) < n && (v as usize) < n, "edge endpoint out of range");
            if w > 0 {
                b.add_index_edge(u, v, w);
            }
        }
        b.build()
    }

    /// Copy without node labels, for internal work graphs.
    pub(crate) fn clone_unlabeled(&self) -> Self {
        Self {
            directed: self.directed,
            labels: LabelIndex::new(),
            out_adj: self.out_adj.clone(),
            in_adj: self.in_adj.clone(),
            self_loop: self.self_loop.clone(),
            out_deg: self.out_deg.clone(),
            in_deg: self.in_deg.clone(),
            alive: self.alive.clone(),
            alive_count: self.alive_count,
            total: self.total,
        }
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Number of node slots, including folded-away ones.
    pub fn n(&self) -> usize {
        self.out_adj.len()
    }

    pub fn alive_count(&self) -> usize {
        self.alive_count
    }

    /// The normalising total: `2m` stubs undirected, `m` arcs directed.
    pub fn total_weight(&self) -> Weight {
        self.total
    }

    /// Edge (or arc) weight `m`.
    pub fn edge_weight_total(&self) -> Weight {
        if self.directed {
            self.total
        } else {
            self.total / 2
        }
    }

    pub fn labels(&self) -> &LabelIndex {
        &self.labels
    }

    pub fn is_alive(&self, v: NodeId) -> bool {
        self.alive.get(v as usize).copied().unwrap_or(false)
    }

    fn check(&self, v: NodeId) -> Result<()> {
        if (v as usize) >= self.n() {
            Err(Error::Index { node: v, n: self.n() })
        } else {
            Ok(())
        }
    }

    /// Weighted degree. Directed graphs report in + out; see
    /// [`Graph::in_out_degree`].
    pub fn degree(&self, v: NodeId) -> Result<Weight> {
        self.check(v)?;
        let v = v as usize;
        Ok(if self.directed {
            self.in_deg[v] + self.out_deg[v]
        } else {
            self.out_deg[v]
        })
    }

    pub fn in_out_degree(&self, v: NodeId) -> Result<(Weight, Weight)> {
        self.check(v)?;
        let v = v as usize;
        Ok(if self.directed {
            (self.in_deg[v], self.out_deg[v])
        } else {
            (self.out_deg[v], self.out_deg[v])
        })
    }

    pub fn self_loop(&self, v: NodeId) -> Weight {
        self.self_loop[v as usize]
    }

    /// `(e, a)` of the node, i.e. of the cluster it stands for.
    pub fn summary(&self, v: NodeId) -> ClusterSummary {
        let i = v as usize;
        let a_in = if self.directed { self.in_deg[i] } else { self.out_deg[i] };
        ClusterSummary {
            e: self.self_loop[i],
            a_in,
            a_out: self.out_deg[i],
        }
    }

    /// Neighbours of `v` (out-arcs when directed), unordered.
    pub fn neighbors(&self, v: NodeId) -> impl Iterator<Item = (NodeId, Weight)> + '_ {
        self.out_adj[v as usize].iter().map(|(&k, &w)| (k, w))
    }

    /// In-arcs of `v`. Empty for undirected graphs.
    pub fn in_neighbors(&self, v: NodeId) -> impl Iterator<Item = (NodeId, Weight)> + '_ {
        self.in_adj
            .get(v as usize)
            .into_iter()
            .flat_map(|m| m.iter().map(|(&k, &w)| (k, w)))
    }

    pub(crate) fn out_map(&self, v: NodeId) -> &AdjMap {
        &self.out_adj[v as usize]
    }

    pub(crate) fn in_map(&self, v: NodeId) -> Option<&AdjMap> {
        self.in_adj.get(v as usize)
    }

    /// `W(u,v)`, or the arc weight `u→v` when directed. Zero if absent.
    pub fn weight(&self, u: NodeId, v: NodeId) -> Weight {
        if u == v {
            return self.self_loop[u as usize];
        }
        self.out_adj[u as usize].get(&v).copied().unwrap_or(0)
    }

    /// Internal weight created by merging `u` and `v`: `2·W(u,v)` undirected,
    /// `W(u→v) + W(v→u)` directed.
    pub fn link_stubs(&self, u: NodeId, v: NodeId) -> Weight {
        if self.directed {
            self.weight(u, v) + self.weight(v, u)
        } else {
            2 * self.weight(u, v)
        }
    }

    /// Number of distinct neighbours (out and in combined when directed).
    pub fn adjacency_len(&self, v: NodeId) -> usize {
        let v = v as usize;
        self.out_adj[v].len() + self.in_adj.get(v).map_or(0, |m| m.len())
    }

    /// Each edge once: `u < v` pairs when undirected, every arc when directed.
    /// Self-loops are reported with their stored weight.
    pub fn edges(&self) -> Vec<(NodeId, NodeId, Weight)> {
        let mut out = Vec::new();
        for u in 0..self.n() as NodeId {
            if !self.is_alive(u) {
                continue;
            }
            let mut row: Vec<_> = self
                .neighbors(u)
                .filter(|&(v, _)| self.directed || u < v)
                .map(|(v, w)| (u, v, w))
                .collect();
            row.sort_unstable();
            out.extend(row);
        }
        out
    }

    /// Contracts `i` and `j` into one node and returns its id.
    ///
    /// The endpoint with the longer adjacency list survives and the other
    /// one's list is merged into it, so the cost is linear in the shorter
    /// list. Parallel edges to common neighbours are summed and the edges
    /// between `i` and `j` become internal weight.
    pub fn fold(&mut self, i: NodeId, j: NodeId) -> Result<NodeId> {
        self.check(i)?;
        self.check(j)?;
        if i == j {
            return Err(Error::SelfFold(i));
        }
        for v in [i, j] {
            if !self.alive[v as usize] {
                return Err(Error::DeadNode(v));
            }
        }
        let (li, lj) = (self.adjacency_len(i), self.adjacency_len(j));
        let (keep, gone) = if li > lj || (li == lj && i < j) { (i, j) } else { (j, i) };
        if self.directed {
            self.fold_directed(keep, gone);
        } else {
            self.fold_undirected(keep, gone);
        }
        self.alive[gone as usize] = false;
        self.alive_count -= 1;
        Ok(keep)
    }

    fn fold_undirected(&mut self, keep: NodeId, gone: NodeId) {
        let (k, g) = (keep as usize, gone as usize);
        let between = self.out_adj[k].remove(&gone).unwrap_or(0);
        self.out_adj[g].remove(&keep);
        self.self_loop[k] += self.self_loop[g] + 2 * between;
        let moved = std::mem::take(&mut self.out_adj[g]);
        for (nb, w) in moved {
            let row = &mut self.out_adj[nb as usize];
            row.remove(&gone);
            *row.entry(keep).or_insert(0) += w;
            *self.out_adj[k].entry(nb).or_insert(0) += w;
        }
        self.out_deg[k] += self.out_deg[g];
        self.out_deg[g] = 0;
        self.self_loop[g] = 0;
    }

    fn fold_directed(&mut self, keep: NodeId, gone: NodeId) {
        let (k, g) = (keep as usize, gone as usize);
        let fwd = self.out_adj[k].remove(&gone).unwrap_or(0);
        let back = self.out_adj[g].remove(&keep).unwrap_or(0);
        self.in_adj[k].remove(&gone);
        self.in_adj[g].remove(&keep);
        self.self_loop[k] += self.self_loop[g] + fwd + back;

        let outs = std::mem::take(&mut self.out_adj[g]);
        for (nb, w) in outs {
            let row = &mut self.in_adj[nb as usize];
            row.remove(&gone);
            *row.entry(keep).or_insert(0) += w;
            *self.out_adj[k].entry(nb).or_insert(0) += w;
        }
        let ins = std::mem::take(&mut self.in_adj[g]);
        for (nb, w) in ins {
            let row = &mut self.out_adj[nb as usize];
            row.remove(&gone);
            *row.entry(keep).or_insert(0) += w;
            *self.in_adj[k].entry(nb).or_insert(0) += w;
        }
        self.out_deg[k] += self.out_deg[g];
        self.in_deg[k] += self.in_deg[g];
        self.out_deg[g] = 0;
        self.in_deg[g] = 0;
        self.self_loop[g] = 0;
    }

    /// Renumbers alive nodes densely. Returns the new graph and, for every old
    /// slot, its new id (`None` for folded-away slots).
    pub fn compact(&self) -> (Graph, Vec<Option<NodeId>>) {
        let mut map = vec![None; self.n()];
        let mut labels = LabelIndex::new();
        for (v, slot) in map.iter_mut().enumerate() {
            if self.alive[v] {
                *slot = Some(labels.len() as NodeId);
                labels.intern(self.labels.label(v as NodeId));
            }
        }
        let remap = |m: &AdjMap| -> AdjMap {
            m.iter().map(|(&k, &w)| (map[k as usize].expect("edge to dead node"), w)).collect()
        };
        let alive: Vec<usize> = (0..self.n()).filter(|&v| self.alive[v]).collect();
        let n = alive.len();
        let g = Graph {
            directed: self.directed,
            labels,
            out_adj: alive.iter().map(|&v| remap(&self.out_adj[v])).collect(),
            in_adj: if self.directed {
                alive.iter().map(|&v| remap(&self.in_adj[v])).collect()
            } else {
                Vec::new()
            },
            self_loop: alive.iter().map(|&v| self.self_loop[v]).collect(),
            out_deg: alive.iter().map(|&v| self.out_deg[v]).collect(),
            in_deg: if self.directed {
                alive.iter().map(|&v| self.in_deg[v]).collect()
            } else {
                Vec::new()
            },
            alive: vec![true; n],
            alive_count: n,
            total: self.total,
        };
        (g, map)
    }

    /// The digraph with both arcs `u→v` and `v→u` for every undirected edge.
    pub fn to_symmetric_digraph(&self) -> Graph {
        assert!(!self.directed, "graph is already directed");
        let mut b = GraphBuilder::new(true).self_loops(SelfLoops::Keep);
        for label in self.labels.iter() {
            b.add_node(label);
        }
        for v in 0..self.n() as NodeId {
            for (u, w) in self.neighbors(v) {
                b.add_index_edge(v, u, w);
            }
            // Undirected loops hold two stubs per unit, a directed loop one
            // arc per unit; the digraph needs both orientations, i.e. all stubs.
            if self.self_loop(v) > 0 {
                b.add_index_edge(v, v, self.self_loop(v));
            }
        }
        b.build()
    }

    /// Checks the structural invariants, returning a description of the first
    /// violation.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let mut total = 0;
        for v in 0..self.n() {
            if !self.alive[v] {
                if !self.out_adj[v].is_empty() || self.out_deg[v] != 0 {
                    return Err(format!("dead node {v} still has edges"));
                }
                continue;
            }
            let out: Weight = self.out_adj[v].values().sum::<Weight>() + self.self_loop[v];
            if out != self.out_deg[v] {
                return Err(format!("node {v}: cached degree {} != {out}", self.out_deg[v]));
            }
            for (&u, &w) in &self.out_adj[v] {
                if u as usize == v || !self.alive[u as usize] || w == 0 {
                    return Err(format!("node {v}: bad adjacency entry ({u},{w})"));
                }
                let back = if self.directed {
                    self.in_adj[u as usize].get(&(v as NodeId)).copied()
                } else {
                    self.out_adj[u as usize].get(&(v as NodeId)).copied()
                };
                if back != Some(w) {
                    return Err(format!("edge ({v},{u}) not mirrored"));
                }
            }
            if self.directed {
                let inn: Weight = self.in_adj[v].values().sum::<Weight>() + self.self_loop[v];
                if inn != self.in_deg[v] {
                    return Err(format!("node {v}: cached in-degree mismatch"));
                }
            } else if !self.self_loop[v].is_multiple_of(2) {
                return Err(format!("node {v}: odd undirected self-loop"));
            }
            total += self.out_deg[v];
        }
        if total != self.total {
            return Err(format!("degree sum {total} != total {}", self.total));
        }
        Ok(())
    }
}

pub(crate) fn relocate(e: Error, line: usize) -> Error {
    match e {
        Error::Load { msg, .. } => Error::Load { line, msg },
        other => other,
    }
}
