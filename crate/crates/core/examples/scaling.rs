//! Wall time and gain evaluations as a power-law graph doubles in size.
//!
//! `cargo run --release --example scaling [max_n]`

use gscarf::engine::{cluster_gscarf, EngineOptions};
use gscarf::synth::{gen_chung_lu, PowerLawSpec};

fn main() -> gscarf::Result<()> {
    let max_n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(80_000);
    println!("{:>8} {:>8} {:>10} {:>10} {:>8}", "n", "m", "time_s", "evals", "ratio");
    let mut prev: Option<f64> = None;
    let mut n = 10_000;
    while n <= max_n {
        let g = gen_chung_lu(&PowerLawSpec { n, gamma: 2.1, avg_degree: 10.0, seed: 11 })?;
        let (_, s) = cluster_gscarf(&g, &EngineOptions::default())?;
        let t = s.wall_time.as_secs_f64();
        let ratio = prev.map_or(String::from("-"), |p| format!("{:.2}", t / p));
        println!("{n:>8} {:>8} {t:>10.4} {:>10} {ratio:>8}", g.edge_weight_total(), s.gain_evals);
        prev = Some(t);
        n *= 2;
    }
    Ok(())
}
