//! Scoring against overlapping ground truth by resolving each shared node
//! to the community holding most of its neighbours.

use std::io::Cursor;

use gscarf::engine::{cluster_gscarf, EngineOptions};
use gscarf::evaluation::{nmi, resolve_overlapping_truth};
use gscarf::io::{first_overlap, memberships, parse_communities, parse_edge_list};

const EDGES: &str = "a b\nb c\nc a\nc d\nd e\ne f\nf d\n";
const COMMUNITIES: &str = "a b c\nc d e f\n";

fn main() -> gscarf::Result<()> {
    let g = parse_edge_list(Cursor::new(EDGES), false)?;
    let comms = parse_communities(Cursor::new(COMMUNITIES))?;
    let m = memberships(g.labels(), &comms)?;
    println!("first shared node: {:?}", first_overlap(&m, g.labels()));

    let truth = resolve_overlapping_truth(&m, &g)?;
    for v in 0..g.n() as u32 {
        println!("  {} -> {}", g.labels().label(v), truth.cluster_of(v));
    }
    let (p, _) = cluster_gscarf(&g, &EngineOptions::default())?;
    println!("nmi = {:.4}", nmi(&p, &truth)?);
    Ok(())
}
