#![allow(dead_code)]

use proptest::prelude::*;
use rigidkit_core::Digraph;

/// Every map `[0, sn) -> [0, tn)` as an assignment vector, lexicographic.
pub fn all_maps(sn: usize, tn: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..sn {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..tn).map(move |t| {
                    let mut next = prefix.clone();
                    next.push(t);
                    next
                })
            })
            .collect();
    }
    out
}

/// Naive oracle: filter all maps by edge preservation and pins.
pub fn oracle_homs(s: &Digraph, t: &Digraph, pins: &[(usize, usize)]) -> Vec<Vec<usize>> {
    all_maps(s.n(), t.n())
        .into_iter()
        .filter(|f| pins.iter().all(|&(u, v)| f[u] == v))
        .filter(|f| s.edges().iter().all(|&(a, b)| t.has_edge(f[a], f[b])))
        .collect()
}

pub fn oracle_rigid(g: &Digraph) -> bool {
    oracle_homs(g, g, &[]).iter().all(|f| f.iter().enumerate().all(|(i, &v)| i == v))
}

pub fn digraph_from_mask(n: usize, mask: u64) -> Digraph {
    let slots = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)));
    let edges: Vec<_> = slots.enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e).collect();
    Digraph::new(n, edges).unwrap()
}

pub fn arb_digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
    (0..=max_n).prop_flat_map(|n| {
        let slots = n * n.saturating_sub(1);
        (Just(n), 0u64..1 << slots).prop_map(|(n, mask)| digraph_from_mask(n, mask))
    })
}

pub fn arb_ugraph(min_n: usize, max_n: usize) -> impl Strategy<Value = rigidkit_core::UGraph> {
    (min_n..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let m = pairs.len();
        (Just(n), proptest::collection::vec(any::<bool>(), m)).prop_map(move |(n, keep)| {
            let chosen = pairs.iter().zip(keep).filter(|(_, k)| *k).map(|(&p, _)| p);
            rigidkit_core::UGraph::new(n, chosen).unwrap()
        })
    })
}
