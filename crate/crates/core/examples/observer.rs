//! Watching the merge sequence through a fold observer.

use gscarf::engine::{cluster_gscarf_observed, EngineOptions, FoldEvent, FoldObserver};
use gscarf::Graph;

struct Log(Vec<String>);

impl FoldObserver for Log {
    fn on_fold(&mut self, ev: &FoldEvent<'_>) {
        let mut m = ev.members.to_vec();
        m.sort_unstable();
        self.0.push(format!("#{:<2} gain {:+.5}  merged e={} a={}  members {:?}", ev.step, ev.gain, ev.merged.e, ev.merged.a(), m));
    }
}

fn main() -> gscarf::Result<()> {
    let g = Graph::from_index_edges(
        8,
        &[(0, 1, 1), (1, 2, 1), (2, 0, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1), (5, 3, 1), (5, 6, 1), (6, 7, 1), (7, 5, 1)],
        false,
    );
    let mut log = Log(Vec::new());
    let (p, stats) = cluster_gscarf_observed(&g, &EngineOptions::default(), &mut log)?;
    for line in &log.0 {
        println!("{line}");
    }
    println!("clusters {:?}", p.clusters());
    println!("{stats:?}");
    Ok(())
}
