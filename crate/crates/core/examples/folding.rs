//! Folding two nodes rewires their edges onto one survivor and keeps the
//! internal weight as a self-loop.

use gscarf::Graph;

fn show(g: &Graph) {
    for v in 0..g.n() as u32 {
        if !g.is_alive(v) {
            continue;
        }
        let nbrs: Vec<String> = g.neighbors(v).map(|(u, w)| format!("{u}:{w}")).collect();
        println!("  {v}  loop={:<2} summary={:?}  adj=[{}]", g.self_loop(v), g.summary(v), nbrs.join(" "));
    }
}

fn main() -> gscarf::Result<()> {
    let mut g = Graph::from_edges(
        [("a", "b", 1), ("b", "c", 1), ("c", "a", 1), ("c", "d", 2), ("d", "e", 1)],
        false,
    )?;
    println!("before (total stubs {})", g.total_weight());
    show(&g);

    let x = g.fold(0, 1)?;
    println!("fold a,b -> {x}");
    show(&g);

    let y = g.fold(x, 2)?;
    println!("fold {x},c -> {y}");
    show(&g);

    assert_eq!(g.total_weight(), 12);
    assert!(g.validate().is_ok());
    Ok(())
}
