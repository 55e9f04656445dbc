//! Partition comparison and cluster-size statistics.

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::partition::Partition;

/// Identifier written to reports next to NMI values.
pub const NMI_FORMULA: &str = "arithmetic: 2*I(P;Q)/(H(P)+H(Q)), natural log";

/// Sparse co-membership counts of two partitions of the same nodes.
#[derive(Clone, Debug)]
pub struct ContingencyTable {
    pub counts: FxHashMap<(u32, u32), u64>,
    pub row_sums: Vec<u64>,
    pub col_sums: Vec<u64>,
    pub total: u64,
}

impl ContingencyTable {
    pub fn new(p: &Partition, q: &Partition) -> Result<Self> {
        if p.len() != q.len() {
            return Err(Error::Coverage(format!("partitions cover {} and {} nodes", p.len(), q.len())));
        }
        let mut counts = FxHashMap::default();
        let mut row_sums = vec![0; p.cluster_count()];
        let mut col_sums = vec![0; q.cluster_count()];
        for (&a, &b) in p.assignment().iter().zip(q.assignment()) {
            *counts.entry((a, b)).or_insert(0) += 1;
            row_sums[a as usize] += 1;
            col_sums[b as usize] += 1;
        }
        Ok(Self { counts, row_sums, col_sums, total: p.len() as u64 })
    }
}

/// Entropy of a count vector. Summed in sorted order so the result does not
/// depend on label order.
fn entropy(counts: &[u64], n: f64) -> f64 {
    let mut sorted = counts.to_vec();
    sorted.sort_unstable();
    sorted
        .into_iter()
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Normalised mutual information `2·I(P;Q) / (H(P) + H(Q))`.
///
/// Returns 1 when both partitions are trivial (zero entropy).
pub fn nmi(p: &Partition, q: &Partition) -> Result<f64> {
    let t = ContingencyTable::new(p, q)?;
    let n = t.total as f64;
    let h = entropy(&t.row_sums, n) + entropy(&t.col_sums, n);
    if h == 0.0 {
        return Ok(1.0);
    }
    let mut cells: Vec<(u64, u64, u64)> = t
        .counts
        .iter()
        .map(|(&(a, b), &c)| (c, t.row_sums[a as usize], t.col_sums[b as usize]))
        .collect();
    cells.sort_unstable();
    let mi: f64 = cells
        .into_iter()
        .map(|(c, r, s)| {
            let c = c as f64;
            (c / n) * ((n * c) / (r as f64 * s as f64)).ln()
        })
        .sum();
    Ok((2.0 * mi / h).clamp(0.0, 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SizeStats {
    pub count: usize,
    pub mean: f64,
    pub max: usize,
    pub min: usize,
}

pub fn size_stats(p: &Partition) -> SizeStats {
    let sizes = p.sizes();
    SizeStats {
        count: sizes.len(),
        mean: if sizes.is_empty() { 0.0 } else { p.len() as f64 / sizes.len() as f64 },
        max: sizes.iter().copied().max().unwrap_or(0),
        min: sizes.iter().copied().min().unwrap_or(0),
    }
}

/// Turns overlapping ground truth into a partition.
///
/// `memberships[v]` lists the candidate community ids of node `v`. A node
/// with several candidates goes to the one holding most of its neighbours,
/// ties to the smallest id. Nodes are resolved in id order in a single pass;
/// a neighbour counts only once it has a resolved community (single-candidate
/// nodes are resolved from the start).
pub fn resolve_overlapping_truth(memberships: &[Vec<u32>], g: &Graph) -> Result<Partition> {
    if memberships.len() != g.n() {
        return Err(Error::Coverage(format!(
            "{} membership entries for {} nodes",
            memberships.len(),
            g.n()
        )));
    }
    let mut resolved: Vec<Option<u32>> = Vec::with_capacity(g.n());
    for (v, cands) in memberships.iter().enumerate() {
        match cands.as_slice() {
            [] => {
                return Err(Error::Coverage(format!(
                    "node `{}` has no ground-truth community",
                    g.labels().label(v as NodeId)
                )))
            }
            [only] => resolved.push(Some(*only)),
            _ => resolved.push(None),
        }
    }
    let mut votes: FxHashMap<u32, u64> = FxHashMap::default();
    for (v, cands) in memberships.iter().enumerate() {
        if resolved[v].is_some() {
            continue;
        }
        votes.clear();
        let v = v as NodeId;
        for (u, _) in g.neighbors(v).chain(g.in_neighbors(v)) {
            if let Some(c) = resolved[u as usize] {
                *votes.entry(c).or_insert(0) += 1;
            }
        }
        let pick = cands
            .iter()
            .copied()
            .max_by(|a, b| {
                let (va, vb) = (votes.get(a).unwrap_or(&0), votes.get(b).unwrap_or(&0));
                va.cmp(vb).then(b.cmp(a))
            })
            .expect("non-empty candidates");
        resolved[v as usize] = Some(pick);
    }
    let labels: Vec<u32> = resolved.into_iter().map(|c| c.expect("all resolved")).collect();
    Ok(Partition::from_labels(&labels))
}
