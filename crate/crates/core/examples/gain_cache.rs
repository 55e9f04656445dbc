//! Gain cache on a power-law graph: same partition, fewer evaluations.

use gscarf::cache::GainCache;
use gscarf::engine::{cluster_gscarf, EngineOptions};
use gscarf::metrics::StructTuple;
use gscarf::synth::{gen_chung_lu, PowerLawSpec};

fn main() -> gscarf::Result<()> {
    let mut cache = GainCache::<StructTuple>::new(100);
    let a = cache.lookup_or_compute(StructTuple::new(0, 3, 4, 9, 1));
    let b = cache.lookup_or_compute(StructTuple::new(4, 9, 0, 3, 1));
    assert_eq!(a.to_bits(), b.to_bits());
    println!("mirrored tuples share an entry: {:?}", cache.stats());

    let g = gen_chung_lu(&PowerLawSpec { n: 20_000, gamma: 2.1, avg_degree: 10.0, seed: 7 })?;
    let (p1, s1) = cluster_gscarf(&g, &EngineOptions::default())?;
    let (p2, s2) = cluster_gscarf(&g, &EngineOptions::default().with_cache(false))?;
    assert_eq!(p1, p2);
    println!("\nn={} m={}", g.n(), g.edge_weight_total());
    println!("cached:   evals={:>8} hits={:>8} entries={:>7} {:?}", s1.gain_evals, s1.cache_hits, s1.cache_size, s1.wall_time);
    println!("uncached: evals={:>8} {:?}", s2.gain_evals, s2.wall_time);
    println!("evaluations saved: {:.1}%", 100.0 * (1.0 - s1.gain_evals as f64 / s2.gain_evals as f64));
    Ok(())
}
