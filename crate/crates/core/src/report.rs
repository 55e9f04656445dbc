//! Line-oriented `key=value` run reports.

use std::collections::BTreeMap;
use std::fmt;

use crate::engine::RunStats;
use crate::error::{Error, Result};
use crate::evaluation::{size_stats, NMI_FORMULA};
use crate::graph::Graph;
use crate::metrics::{modularity, sigma_log_lrm};
use crate::partition::Partition;

/// Every field is always written; values that do not apply are `na`.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub algorithm: String,
    pub options: String,
    pub n: usize,
    pub m: u64,
    /// Mean degree `2m / n` (in plus out degree when directed).
    pub d: f64,
    pub k: usize,
    pub mean_cluster_size: f64,
    pub sigma_l: Option<f64>,
    pub q: Option<f64>,
    pub nmi: Option<f64>,
    pub stats: RunStats,
}

impl Report {
    /// Scores `p` on `g`. `ΣL` and `Q` are `None` on graphs without edges,
    /// `Q` also for directed graphs.
    pub fn new(algorithm: &str, options: &str, g: &Graph, p: &Partition, stats: RunStats) -> Result<Self> {
        let m = g.edge_weight_total();
        let n = g.n();
        let sizes = size_stats(p);
        let defined = |r: Result<f64>| match r {
            Ok(x) => Ok(Some(x)),
            Err(Error::UndefinedMetric) => Ok(None),
            Err(e) => Err(e),
        };
        let sigma_l = defined(sigma_log_lrm(p, g))?;
        let q = if g.is_directed() { None } else { defined(modularity(p, g))? };
        Ok(Self {
            algorithm: algorithm.to_string(),
            options: options.to_string(),
            n,
            m,
            d: if n == 0 { 0.0 } else { 2.0 * m as f64 / n as f64 },
            k: sizes.count,
            mean_cluster_size: sizes.mean,
            sigma_l,
            q,
            nmi: None,
            stats,
        })
    }

    pub fn with_nmi(mut self, nmi: f64) -> Self {
        self.nmi = Some(nmi);
        self
    }
}

struct Opt(Option<f64>);

impl fmt::Display for Opt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(x) => write!(f, "{x:?}"),
            None => f.write_str("na"),
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.stats;
        writeln!(f, "algorithm={}", self.algorithm)?;
        writeln!(f, "options={}", self.options)?;
        writeln!(f, "n={}", self.n)?;
        writeln!(f, "m={}", self.m)?;
        writeln!(f, "d={:?}", self.d)?;
        writeln!(f, "k={}", self.k)?;
        writeln!(f, "mean_cluster_size={:?}", self.mean_cluster_size)?;
        writeln!(f, "sigma_l={}", Opt(self.sigma_l))?;
        writeln!(f, "q={}", Opt(self.q))?;
        writeln!(f, "nmi={}", Opt(self.nmi))?;
        writeln!(f, "gain_evals={}", s.gain_evals)?;
        writeln!(f, "cache_hits={}", s.cache_hits)?;
        writeln!(f, "cache_size={}", s.cache_size)?;
        writeln!(f, "folds={}", s.folds)?;
        writeln!(f, "iterations={}", s.iterations)?;
        writeln!(f, "wall_time_s={:?}", s.wall_time.as_secs_f64())?;
        writeln!(f, "nmi_formula={NMI_FORMULA}")
    }
}

/// Splits report text into its fields. Later duplicates win.
pub fn parse_report(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::load(i + 1, format!("expected `key=value`, found `{line}`")))?;
        out.insert(k.to_string(), v.to_string());
    }
    Ok(out)
}
