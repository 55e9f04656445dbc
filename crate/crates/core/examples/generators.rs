//! The two synthetic models and the files they round-trip through.

use gscarf::io::{parse_edge_list, write_communities, write_edge_list};
use gscarf::synth::{gen_chung_lu, gen_planted, PlantedSpec, PowerLawSpec};

fn main() -> gscarf::Result<()> {
    let (g, truth) = gen_planted(&PlantedSpec { n: 1000, k: 10, mu: 0.2, avg_degree: 12.0, seed: 1 })?;
    let intra = g.edges().iter().filter(|&&(u, v, _)| truth.cluster_of(u) == truth.cluster_of(v)).count();
    println!(
        "planted: n={} m={} mean degree {:.2}, intra fraction {:.3}",
        g.n(),
        g.edge_weight_total(),
        g.total_weight() as f64 / g.n() as f64,
        intra as f64 / g.edges().len() as f64
    );

    let mut buf = Vec::new();
    write_edge_list(&mut buf, &g)?;
    let back = parse_edge_list(buf.as_slice(), false)?;
    assert_eq!(back.edge_weight_total(), g.edge_weight_total());
    let mut comms = Vec::new();
    write_communities(&mut comms, g.labels(), &truth)?;
    println!("  edge list {} bytes, communities {} lines", buf.len(), comms.iter().filter(|&&b| b == b'\n').count());

    let pl = gen_chung_lu(&PowerLawSpec { n: 50_000, gamma: 2.1, avg_degree: 10.0, seed: 7 })?;
    let mut deg: Vec<u64> = (0..pl.n() as u32).map(|v| pl.degree(v).unwrap()).collect();
    deg.sort_unstable_by(|a, b| b.cmp(a));
    println!("chung-lu: n={} m={} top degrees {:?}", pl.n(), pl.edge_weight_total(), &deg[..8]);
    println!("  isolated nodes: {}", deg.iter().filter(|&&d| d == 0).count());
    Ok(())
}
