//! Two-phase Louvain baseline: local moving by modularity gain, then
//! aggregation of each community into one node by repeated folding.

use std::time::Instant;

use rustc_hash::FxHashMap;

use super::RunStats;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, Weight};
use crate::metrics::{modularity_gain, sigma_log_lrm, StructTuple};
use crate::partition::Partition;

const MAX_PASSES: u64 = 10_000;

pub fn cluster_louvain(g: &Graph) -> Result<(Partition, RunStats)> {
    if g.is_directed() {
        return Err(Error::Config("louvain supports undirected graphs only".into()));
    }
    let start = Instant::now();
    let mut stats = RunStats::default();
    let n = g.n();
    if n == 0 {
        return Ok((Partition::singletons(0), stats));
    }

    let mut level = g.clone();
    let mut originals: Vec<Vec<NodeId>> = (0..n as NodeId).map(|v| vec![v]).collect();
    loop {
        let (community, moved) = local_moving(&level, &mut stats);
        if !moved {
            break;
        }
        let k = community.iter().max().map_or(0, |&c| c as usize + 1);
        let mut heads: Vec<Option<NodeId>> = vec![None; k];
        let mut grouped: Vec<Vec<NodeId>> = vec![Vec::new(); k];
        for v in 0..level.n() as NodeId {
            let c = community[v as usize] as usize;
            grouped[c].extend(std::mem::take(&mut originals[v as usize]));
            heads[c] = Some(match heads[c] {
                None => v,
                Some(h) => {
                    stats.folds += 1;
                    level.fold(h, v)?
                }
            });
        }
        let (next, map) = level.compact();
        let mut next_originals = vec![Vec::new(); next.n()];
        for (c, head) in heads.into_iter().enumerate() {
            if let Some(h) = head {
                next_originals[map[h as usize].expect("head is alive") as usize] = std::mem::take(&mut grouped[c]);
            }
        }
        level = next;
        originals = next_originals;
    }

    let mut labels = vec![0u32; n];
    for (c, members) in originals.iter().enumerate() {
        for &v in members {
            labels[v as usize] = c as u32;
        }
    }
    let partition = Partition::from_labels(&labels);
    if g.total_weight() > 0 {
        stats.final_sigma_l = sigma_log_lrm(&partition, g)?;
    }
    stats.wall_time = start.elapsed();
    Ok((partition, stats))
}

/// Moves nodes (in id order) to the neighbouring community with the largest
/// strictly positive improvement until a full pass makes no move. Returns
/// dense community labels and whether anything moved.
fn local_moving(g: &Graph, stats: &mut RunStats) -> (Vec<u32>, bool) {
    let n = g.n();
    let total = g.total_weight();
    let mut community: Vec<u32> = (0..n as u32).collect();
    let degree: Vec<Weight> = (0..n as NodeId).map(|v| g.summary(v).a()).collect();
    let mut sigma_tot = degree.clone();
    let mut links: FxHashMap<u32, Weight> = FxHashMap::default();
    let mut any_move = false;
    if total == 0 {
        return (community, false);
    }

    for _ in 0..MAX_PASSES {
        stats.iterations += 1;
        let mut moved = false;
        for v in 0..n as NodeId {
            let own = community[v as usize];
            let k_v = degree[v as usize];
            sigma_tot[own as usize] -= k_v;
            links.clear();
            links.insert(own, 0);
            for (u, w) in g.neighbors(v) {
                *links.entry(community[u as usize]).or_insert(0) += w;
            }
            let gain = |c: u32, w: Weight| {
                modularity_gain(&StructTuple::new(0, k_v, 0, sigma_tot[c as usize], w), total)
            };
            let stay = gain(own, links[&own]);
            stats.gain_evals += 1;
            let mut best = (stay, own);
            for (&c, &w) in &links {
                if c == own {
                    continue;
                }
                let g = gain(c, w);
                stats.gain_evals += 1;
                if g > best.0 || (g == best.0 && best.1 != own && c < best.1) {
                    best = (g, c);
                }
            }
            sigma_tot[best.1 as usize] += k_v;
            if best.1 != own {
                community[v as usize] = best.1;
                moved = true;
                any_move = true;
            }
        }
        if !moved {
            break;
        }
    }

    let dense = Partition::from_labels(&community).assignment().to_vec();
    (dense, any_move)
}
