use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::graph::NodeId;

/// Assignment of nodes `0..n` to clusters `0..k`.
///
/// Labels are always dense and numbered in order of first appearance when
/// scanning nodes by id, so two partitions with the same clusters compare
/// equal regardless of how they were produced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    assignment: Vec<u32>,
    k: usize,
}

impl Partition {
    pub fn from_labels<L: Copy + Eq + Hash>(labels: &[L]) -> Self {
        let mut dense: HashMap<L, u32> = HashMap::new();
        let assignment = labels
            .iter()
            .map(|l| {
                let next = dense.len() as u32;
                *dense.entry(*l).or_insert(next)
            })
            .collect();
        Self { assignment, k: dense.len() }
    }

    pub fn singletons(n: usize) -> Self {
        Self { assignment: (0..n as u32).collect(), k: n }
    }

    /// Builds a partition from disjoint member lists that must cover `0..n`.
    pub fn from_clusters(n: usize, clusters: &[Vec<NodeId>]) -> Result<Self> {
        let mut raw = vec![u32::MAX; n];
        for (c, members) in clusters.iter().enumerate() {
            for &v in members {
                let slot = raw
                    .get_mut(v as usize)
                    .ok_or_else(|| Error::Coverage(format!("node {v} outside 0..{n}")))?;
                if *slot != u32::MAX {
                    return Err(Error::Coverage(format!("node {v} in two clusters")));
                }
                *slot = c as u32;
            }
        }
        if let Some(v) = raw.iter().position(|&c| c == u32::MAX) {
            return Err(Error::Coverage(format!("node {v} not assigned")));
        }
        Ok(Self::from_labels(&raw))
    }

    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    pub fn cluster_of(&self, v: NodeId) -> u32 {
        self.assignment[v as usize]
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn cluster_count(&self) -> usize {
        self.k
    }

    pub fn clusters(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.k];
        for (v, &c) in self.assignment.iter().enumerate() {
            out[c as usize].push(v as NodeId);
        }
        out
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.k];
        for &c in &self.assignment {
            out[c as usize] += 1;
        }
        out
    }
}
