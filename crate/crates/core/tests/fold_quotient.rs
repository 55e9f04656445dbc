//! Any sequence of folds must leave the quotient graph of the induced node
//! partition, with per-node LRM equal to that of the member set.

use proptest::prelude::*;

use gscarf::graph::ClusterSummary;
use gscarf::metrics::summary_log_lrm;
use gscarf::{Graph, NodeId, Weight};

type Edges = Vec<(NodeId, NodeId, Weight)>;

fn graph_and_folds() -> impl Strategy<Value = (usize, Edges, Vec<(usize, usize)>)> {
    (2usize..=8).prop_flat_map(|n| {
        let edge = (0..n as NodeId, 0..n as NodeId, 1u64..4);
        let fold = (0..n, 0..n);
        (Just(n), proptest::collection::vec(edge, 0..20), proptest::collection::vec(fold, 0..n))
    })
}

/// Brute-force quotient weights from the original edges.
fn quotient(n: usize, edges: &Edges, owner: &[usize], directed: bool) -> Vec<Vec<Weight>> {
    let mut q = vec![vec![0; n]; n];
    for &(u, v, w) in edges {
        let (a, b) = (owner[u as usize], owner[v as usize]);
        if a == b {
            // undirected: two stubs per unit of internal weight (loops too)
            q[a][a] += if directed { w } else { 2 * w };
        } else {
            q[a][b] += w;
            if !directed {
                q[b][a] += w;
            }
        }
    }
    q
}

fn check(n: usize, edges: &Edges, folds: &[(usize, usize)], directed: bool) -> Result<(), TestCaseError> {
    let original = Graph::from_index_edges(n, edges, directed);
    let mut g = original.clone();
    let total = g.total_weight();
    let mut owner: Vec<usize> = (0..n).collect();
    let mut members: Vec<Vec<NodeId>> = (0..n as NodeId).map(|v| vec![v]).collect();

    for &(a, b) in folds {
        let (a, b) = (owner[a], owner[b]);
        if a == b {
            continue;
        }
        let x = g.fold(a as NodeId, b as NodeId).unwrap() as usize;
        let gone = if x == a { b } else { a };
        let moved = std::mem::take(&mut members[gone]);
        for &v in &moved {
            owner[v as usize] = x;
        }
        members[x].extend(moved);
    }

    prop_assert_eq!(g.total_weight(), total);
    prop_assert!(g.validate().is_ok(), "{:?}", g.validate());
    let q = quotient(n, edges, &owner, directed);
    let alive: Vec<usize> = (0..n).filter(|&c| g.is_alive(c as NodeId)).collect();
    for &x in &alive {
        prop_assert_eq!(g.self_loop(x as NodeId), q[x][x], "self weight of {}", x);
        for &y in &alive {
            if x != y {
                prop_assert_eq!(g.weight(x as NodeId, y as NodeId), q[x][y], "weight {} -> {}", x, y);
            }
        }
        let mut expect = ClusterSummary { e: q[x][x], ..Default::default() };
        for &v in &members[x] {
            let s = original.summary(v);
            expect.a_in += s.a_in;
            expect.a_out += s.a_out;
        }
        prop_assert_eq!(g.summary(x as NodeId), expect);
        if total > 0 {
            let err = (summary_log_lrm(&g.summary(x as NodeId), total) - summary_log_lrm(&expect, total)).abs();
            prop_assert!(err <= 1e-12);
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn undirected_folds_match_quotient((n, edges, folds) in graph_and_folds()) {
        check(n, &edges, &folds, false)?;
    }

    #[test]
    fn directed_folds_match_quotient((n, edges, folds) in graph_and_folds()) {
        check(n, &edges, &folds, true)?;
    }
}

#[test]
fn fold_everything_into_one_node() {
    let edges: Edges = vec![(0, 1, 1), (1, 2, 2), (2, 3, 1), (3, 0, 3), (0, 2, 1)];
    let mut g = Graph::from_index_edges(4, &edges, false);
    let mut x = 0;
    for v in 1..4 {
        x = g.fold(x, v).unwrap();
    }
    assert_eq!(g.alive_count(), 1);
    assert_eq!(g.self_loop(x), g.total_weight());
    assert_eq!(g.total_weight(), 16);
}
