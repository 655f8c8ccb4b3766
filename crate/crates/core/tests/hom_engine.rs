mod common;

use common::{all_maps, arb_digraph, digraph_from_mask, oracle_homs, oracle_rigid};
use proptest::prelude::*;
use rigidkit_core::hom::{self, count_homs, is_homomorphism, HomQuery};
use rigidkit_core::search::transitive_tournament;
use rigidkit_core::{enumerate_homs, is_rigid, Digraph, VertexMap};

fn images(maps: Vec<VertexMap>) -> Vec<Vec<usize>> {
    maps.into_iter().map(|m| m.image).collect()
}

#[test]
fn arc_into_t3_matches_oracle() {
    let arc = Digraph::new(2, [(0, 1)]).unwrap();
    let t3 = transitive_tournament(3);
    assert_eq!(all_maps(2, 3).len(), 9);
    let expected = oracle_homs(&arc, &t3, &[]);
    assert_eq!(expected.len(), 3);
    assert_eq!(images(enumerate_homs(&HomQuery::new(&arc, &t3)).unwrap()), expected);
    let pinned = oracle_homs(&arc, &t3, &[(0, 2)]);
    assert!(pinned.is_empty());
    assert_eq!(count_homs(&HomQuery::new(&arc, &t3).pin(0, 2)).unwrap(), 0);
}

#[test]
fn directed_triangle_rotations() {
    let c3 = Digraph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
    let expected = oracle_homs(&c3, &c3, &[]);
    assert_eq!(expected, vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]);
    assert_eq!(images(enumerate_homs(&HomQuery::new(&c3, &c3)).unwrap()), expected);
}

#[test]
fn rigidity_examples() {
    assert!(is_rigid(&Digraph::empty(1)).is_rigid());
    let two = is_rigid(&Digraph::empty(2));
    assert_eq!(two.counterexample.unwrap().image, vec![0, 0]);
    let t4 = transitive_tournament(4);
    assert!(oracle_rigid(&t4));
    assert!(is_rigid(&t4).is_rigid());
    let edge = Digraph::new(2, [(0, 1), (1, 0)]).unwrap();
    assert_eq!(is_rigid(&edge).counterexample.unwrap().image, vec![1, 0]);
}

#[test]
fn all_three_vertex_pairs_match_oracle() {
    let all: Vec<Digraph> = (0..64).map(|m| digraph_from_mask(3, m)).collect();
    for s in &all {
        for t in &all {
            let got = images(enumerate_homs(&HomQuery::new(s, t)).unwrap());
            assert_eq!(got, oracle_homs(s, t, &[]), "{s:?} -> {t:?}");
        }
    }
}

#[test]
fn parallel_split_is_invisible() {
    // Large enough target to take the parallel path.
    let source = Digraph::new(3, [(0, 1), (1, 2)]).unwrap();
    let target = transitive_tournament(60);
    let sequential = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let parallel = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let q = HomQuery::new(&source, &target);
    let a = sequential.install(|| hom::search(&q).unwrap());
    let b = parallel.install(|| hom::search(&q).unwrap());
    assert_eq!(a, b);
    let limited = HomQuery::new(&source, &target).limit(500);
    let a = sequential.install(|| enumerate_homs(&limited).unwrap());
    let b = parallel.install(|| enumerate_homs(&limited).unwrap());
    assert_eq!(a, b);
    assert_eq!(a.len(), 500);
    let all = enumerate_homs(&q).unwrap();
    assert_eq!(all.len(), (0..60).map(|m| m * (59 - m)).sum::<usize>());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn engine_equals_oracle(s in arb_digraph(4), t in arb_digraph(4), pin_seed in any::<u64>()) {
        let mut pins = Vec::new();
        if s.n() > 0 && t.n() > 0 && pin_seed % 3 != 0 {
            pins.push(((pin_seed as usize / 3) % s.n(), (pin_seed as usize / 7) % t.n()));
        }
        let mut q = HomQuery::new(&s, &t);
        for &(u, v) in &pins {
            q = q.pin(u, v);
        }
        prop_assert_eq!(images(enumerate_homs(&q).unwrap()), oracle_homs(&s, &t, &pins));
    }

    #[test]
    fn identity_is_an_endomorphism(g in arb_digraph(6)) {
        let maps = images(enumerate_homs(&HomQuery::new(&g, &g)).unwrap());
        let id: Vec<usize> = (0..g.n()).collect();
        prop_assert!(maps.contains(&id));
    }

    #[test]
    fn composition_closure(a in arb_digraph(3), b in arb_digraph(3), c in arb_digraph(3)) {
        let ab = images(enumerate_homs(&HomQuery::new(&a, &b)).unwrap());
        let bc = images(enumerate_homs(&HomQuery::new(&b, &c)).unwrap());
        for f in ab.iter().take(8) {
            for h in bc.iter().take(8) {
                let composed: Vec<usize> = f.iter().map(|&x| h[x]).collect();
                prop_assert!(is_homomorphism(&a, &c, &composed));
            }
        }
    }

    #[test]
    fn rigidity_matches_oracle(g in arb_digraph(4)) {
        let cert = is_rigid(&g);
        prop_assert_eq!(cert.is_rigid(), oracle_rigid(&g));
        if let Some(map) = cert.counterexample {
            prop_assert!(!map.is_identity());
            prop_assert!(is_homomorphism(&g, &g, &map.image));
        }
    }

    #[test]
    fn limit_takes_a_sorted_prefix_of_results(s in arb_digraph(3), t in arb_digraph(4), limit in 0usize..6) {
        let all = images(enumerate_homs(&HomQuery::new(&s, &t)).unwrap());
        let some = images(enumerate_homs(&HomQuery::new(&s, &t).limit(limit)).unwrap());
        prop_assert_eq!(some.len(), all.len().min(limit));
        prop_assert!(some.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(some.iter().all(|m| all.contains(m)));
    }
}
