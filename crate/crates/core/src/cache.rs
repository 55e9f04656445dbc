//! Exact memoisation of merge gains.
//!
//! The gain of a merge is a pure function of the structural key and the
//! graph total, so equal keys can reuse a stored value. Keys are integers
//! and are canonicalised before lookup, which makes the cache transparent:
//! a hit returns exactly the bits a fresh evaluation would produce.

use rustc_hash::FxHashMap;

use crate::graph::Weight;
use crate::metrics::GainKey;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
    pub size: usize,
}

/// Gain table bound to one graph total. No eviction.
#[derive(Debug)]
pub struct GainCache<K: GainKey> {
    table: FxHashMap<K, f64>,
    hits: u64,
    misses: u64,
    total: Weight,
}

impl<K: GainKey> GainCache<K> {
    pub fn new(total: Weight) -> Self {
        Self { table: FxHashMap::default(), hits: 0, misses: 0, total }
    }

    /// The graph total this cache is valid for.
    pub fn bound_total(&self) -> Weight {
        self.total
    }

    pub fn lookup_or_compute(&mut self, key: K) -> f64 {
        let key = key.canonical();
        if let Some(&g) = self.table.get(&key) {
            self.hits += 1;
            return g;
        }
        self.misses += 1;
        let g = key.lrm_gain(self.total);
        self.table.insert(key, g);
        g
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats { hits: self.hits, misses: self.misses, size: self.table.len() }
    }
}
