//! Seeded synthetic graphs.
//!
//! All randomness comes from `ChaCha8Rng`, whose output stream is fixed by
//! its seed on every platform, so a spec always yields the same edge list.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, Weight};
use crate::partition::Partition;

/// Planted-partition benchmark with a mixing parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct PlantedSpec {
    pub n: usize,
    /// Number of communities; sizes differ by at most one.
    pub k: usize,
    /// Probability that an edge end is placed uniformly over the whole graph
    /// instead of inside the node's own community.
    pub mu: f64,
    pub avg_degree: f64,
    pub seed: u64,
}

impl PlantedSpec {
    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Spec(m));
        if self.n == 0 {
            return bad("n must be positive".into());
        }
        if self.k == 0 || self.k > self.n {
            return bad(format!("k = {} must lie in 1..={}", self.k, self.n));
        }
        if !(0.0..=1.0).contains(&self.mu) {
            return bad(format!("mu = {} outside [0, 1]", self.mu));
        }
        if !(self.avg_degree >= 0.0 && self.avg_degree.is_finite()) {
            return bad(format!("avg_degree = {} must be finite and non-negative", self.avg_degree));
        }
        if self.avg_degree == 0.0 {
            return Ok(());
        }
        if self.avg_degree > (self.n - 1) as f64 {
            return bad(format!("avg_degree {} exceeds n - 1", self.avg_degree));
        }
        let smallest = self.n / self.k;
        let intra = (1.0 - self.mu) * self.avg_degree;
        if intra > 0.0 && (smallest < 2 || intra > (smallest - 1) as f64) {
            return bad(format!(
                "intra-community degree {intra} needs communities larger than {smallest} nodes"
            ));
        }
        Ok(())
    }

    /// Community of every node: contiguous blocks.
    pub fn communities(&self) -> Vec<u32> {
        (0..self.n).map(|v| (v as u64 * self.k as u64 / self.n as u64) as u32).collect()
    }
}

/// Each node starts `avg_degree / 2` edges (the fractional part by a coin
/// flip). An edge end lands inside the node's community with probability
/// `1 − mu`, otherwise on a uniform node of the whole graph. Duplicate edges
/// are merged by weight; there are no self-loops.
pub fn gen_planted(spec: &PlantedSpec) -> Result<(Graph, Partition)> {
    spec.validate()?;
    let n = spec.n;
    let comm = spec.communities();
    let mut starts = vec![0usize; spec.k + 1];
    for &c in &comm {
        starts[c as usize + 1] += 1;
    }
    for c in 0..spec.k {
        starts[c + 1] += starts[c];
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let half = spec.avg_degree / 2.0;
    let whole = half.floor() as usize;
    let frac = half - half.floor();
    let mut edges: Vec<(NodeId, NodeId, Weight)> = Vec::with_capacity(n * (whole + 1));
    for (v, &c) in comm.iter().enumerate() {
        let stubs = whole + usize::from(frac > 0.0 && rng.gen::<f64>() < frac);
        let c = c as usize;
        let (lo, hi) = (starts[c], starts[c + 1]);
        for _ in 0..stubs {
            let u = if rng.gen::<f64>() < spec.mu {
                other_than(&mut rng, 0, n, v)
            } else {
                other_than(&mut rng, lo, hi, v)
            };
            edges.push((v as NodeId, u as NodeId, 1));
        }
    }
    let g = Graph::from_index_edges(n, &edges, false);
    Ok((g, Partition::from_labels(&comm)))
}

/// Uniform in `lo..hi` excluding `skip` (which lies in the range).
fn other_than(rng: &mut ChaCha8Rng, lo: usize, hi: usize, skip: usize) -> usize {
    let u = rng.gen_range(lo..hi - 1);
    if u >= skip {
        u + 1
    } else {
        u
    }
}

/// Chung–Lu graph with a power-law expected degree sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerLawSpec {
    pub n: usize,
    /// Degree-distribution exponent, `> 1`.
    pub gamma: f64,
    pub avg_degree: f64,
    pub seed: u64,
}

/// Expected degrees `w_v ∝ (v + 1)^(−1/(γ−1))`, scaled to `avg_degree`, with
/// each edge `u–v` present independently with probability
/// `min(1, w_u·w_v / Σw)`. Uses geometric skipping over the weight-sorted
/// nodes, so the cost is linear in `n + m`.
pub fn gen_chung_lu(spec: &PowerLawSpec) -> Result<Graph> {
    if !(spec.gamma > 1.0 && spec.gamma.is_finite()) {
        return Err(Error::Spec(format!("gamma = {} must be > 1", spec.gamma)));
    }
    if !(spec.avg_degree >= 0.0 && spec.avg_degree.is_finite()) {
        return Err(Error::Spec(format!("avg_degree = {} must be finite and non-negative", spec.avg_degree)));
    }
    let n = spec.n;
    let expo = -1.0 / (spec.gamma - 1.0);
    let raw: Vec<f64> = (0..n).map(|v| ((v + 1) as f64).powf(expo)).collect();
    let raw_sum: f64 = raw.iter().sum();
    let scale = if raw_sum > 0.0 { spec.avg_degree * n as f64 / raw_sum } else { 0.0 };
    let w: Vec<f64> = raw.iter().map(|x| x * scale).collect();
    let total: f64 = w.iter().sum();

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut edges = Vec::new();
    if total > 0.0 {
        for u in 0..n.saturating_sub(1) {
            let mut v = u + 1;
            let mut p = (w[u] * w[v] / total).min(1.0);
            while v < n && p > 0.0 {
                if p < 1.0 {
                    let r = 1.0 - rng.gen::<f64>();
                    let skip = (r.ln() / (1.0 - p).ln()).floor();
                    if skip >= (n - v) as f64 {
                        break;
                    }
                    v += skip as usize;
                }
                let q = (w[u] * w[v] / total).min(1.0);
                if rng.gen::<f64>() < q / p {
                    edges.push((u as NodeId, v as NodeId, 1));
                }
                p = q;
                v += 1;
            }
        }
    }
    Ok(Graph::from_index_edges(n, &edges, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn planted(mu: f64) -> PlantedSpec {
        PlantedSpec { n: 1000, k: 10, mu, avg_degree: 10.0, seed: 42 }
    }

    #[test]
    fn mu_zero_keeps_edges_inside() {
        let spec = planted(0.0);
        let (g, truth) = gen_planted(&spec).unwrap();
        for (u, v, _) in g.edges() {
            assert_eq!(truth.cluster_of(u), truth.cluster_of(v));
        }
    }

    #[test]
    fn mu_one_intra_fraction_is_chance() {
        let (g, truth) = gen_planted(&planted(1.0)).unwrap();
        let (mut intra, mut all) = (0, 0);
        for (u, v, w) in g.edges() {
            all += w;
            if truth.cluster_of(u) == truth.cluster_of(v) {
                intra += w;
            }
        }
        let frac = intra as f64 / all as f64;
        assert!((frac - 0.1).abs() <= 0.05, "intra fraction {frac}");
    }

    #[test]
    fn planted_is_deterministic_and_sized() {
        let (a, ta) = gen_planted(&planted(0.3)).unwrap();
        let (b, tb) = gen_planted(&planted(0.3)).unwrap();
        assert_eq!(a.edges(), b.edges());
        assert_eq!(ta, tb);
        assert_eq!(ta.sizes(), vec![100; 10]);
        let mean = a.total_weight() as f64 / a.n() as f64;
        assert!((mean - 10.0).abs() <= 1.0, "mean degree {mean}");
        a.validate().unwrap();
    }

    #[test]
    fn uneven_community_sizes() {
        let spec = PlantedSpec { n: 10, k: 3, mu: 0.5, avg_degree: 2.0, seed: 1 };
        let (_, truth) = gen_planted(&spec).unwrap();
        let mut sizes = truth.sizes();
        sizes.sort();
        assert_eq!(sizes, vec![3, 3, 4]);
    }

    #[test]
    fn planted_rejects_bad_specs() {
        for spec in [
            PlantedSpec { mu: 1.5, ..planted(0.0) },
            PlantedSpec { mu: -0.1, ..planted(0.0) },
            PlantedSpec { k: 0, ..planted(0.0) },
            PlantedSpec { k: 1000, ..planted(0.0) },
            PlantedSpec { avg_degree: 150.0, ..planted(0.0) },
            PlantedSpec { n: 0, ..planted(0.0) },
        ] {
            assert!(matches!(gen_planted(&spec), Err(Error::Spec(_))), "{spec:?}");
        }
        // fully mixed edges need no community room
        assert!(gen_planted(&PlantedSpec { k: 1000, mu: 1.0, ..planted(0.0) }).is_ok());
    }

    #[test]
    fn chung_lu_basics() {
        let g = gen_chung_lu(&PowerLawSpec { n: 1, gamma: 2.1, avg_degree: 10.0, seed: 7 }).unwrap();
        assert_eq!((g.n(), g.total_weight()), (1, 0));
        let spec = PowerLawSpec { n: 2000, gamma: 2.5, avg_degree: 8.0, seed: 3 };
        let a = gen_chung_lu(&spec).unwrap();
        assert_eq!(a.edges(), gen_chung_lu(&spec).unwrap().edges());
        assert!(a.edges().iter().all(|&(u, v, w)| u != v && w == 1));
        assert!(gen_chung_lu(&PowerLawSpec { gamma: 1.0, ..spec }).is_err());
    }
}
