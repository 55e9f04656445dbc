//! Recovering planted communities across mixing levels, against Louvain.

use gscarf::engine::{cluster_gscarf, cluster_louvain, EngineOptions};
use gscarf::evaluation::{nmi, size_stats};
use gscarf::synth::{gen_planted, PlantedSpec};

fn main() -> gscarf::Result<()> {
    println!("{:>4} {:>8} {:>6} {:>8} {:>6}", "mu", "gscarf", "k", "louvain", "k");
    for i in 1..=6 {
        let mu = 0.1 * i as f64;
        let spec = PlantedSpec { n: 2000, k: 20, mu, avg_degree: 16.0, seed: 42 };
        let (g, truth) = gen_planted(&spec)?;
        let (pg, _) = cluster_gscarf(&g, &EngineOptions::default())?;
        let (pl, _) = cluster_louvain(&g)?;
        println!(
            "{mu:>4.1} {:>8.4} {:>6} {:>8.4} {:>6}",
            nmi(&pg, &truth)?,
            size_stats(&pg).count,
            nmi(&pl, &truth)?,
            size_stats(&pl).count
        );
    }
    Ok(())
}
