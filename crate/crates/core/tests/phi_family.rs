mod common;

use std::collections::{BTreeSet, HashSet};

use common::{arb_ugraph, oracle_homs};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rigidkit_core::hom::{is_homomorphism, HomQuery};
use rigidkit_core::phi::{self, PhiViolation};
use rigidkit_core::{enumerate_homs, Digraph, UGraph};

/// Clauses checked pair by pair, independently of the library.
fn satisfies_clauses(base: &UGraph, s: &Digraph) -> bool {
    let n = base.n();
    (0..n).all(|a| {
        (0..n).filter(|&b| b != a).all(|b| {
            let contains = !base.has_edge(a, b) || s.has_edge(a, b);
            let complete = s.has_edge(a, b) || s.has_edge(b, a);
            let no_extra = !(s.has_edge(a, b) && s.has_edge(b, a)) || base.has_edge(a, b);
            contains && complete && no_extra
        })
    })
}

#[test]
fn path_member_is_as_described() {
    let path = UGraph::new(3, [(0, 1), (1, 2)]).unwrap();
    let m = phi::build_phi_member(&path, &[false]).unwrap();
    let expected: BTreeSet<_> = [(0, 1), (1, 0), (1, 2), (2, 1), (0, 2)].into_iter().collect();
    assert_eq!(m.realized.edges().iter().copied().collect::<BTreeSet<_>>(), expected);
    assert!(satisfies_clauses(&path, &m.realized));
}

#[test]
fn triangle_completion_is_the_base() {
    let tri = UGraph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
    assert_eq!(phi::build_phi_member(&tri, &[]).unwrap().realized, *tri.as_digraph());
}

#[test]
fn counts_match_for_small_non_edge_sets() {
    // Every base on up to 5 vertices has at most 10 non-edge pairs.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 1..=5 {
        for _ in 0..6 {
            let base = phi::sample_orientation(&UGraph::empty(n), &mut rng).symmetric_closure();
            let t = phi::compute_t(&base);
            assert!(t.len() <= 10);
            let members: HashSet<Digraph> = phi::enumerate_phi(&t).unwrap().map(|m| m.realized).collect();
            assert_eq!(members.len() as u128, t.phi_count().unwrap());
            assert!(members.iter().all(|s| satisfies_clauses(&base, s)));
        }
    }
}

#[test]
fn orientation_count_and_uniqueness() {
    let base = UGraph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
    let all: HashSet<Digraph> = phi::enumerate_orientations(&base).unwrap().collect();
    assert_eq!(all.len(), 16);
    for o in &all {
        assert_eq!(o.edge_count(), 4);
        assert_eq!(o.symmetric_closure(), base);
    }
}

#[test]
fn sampling_distinct_members() {
    let t = phi::compute_t(&UGraph::empty(4));
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let members = phi::sample_distinct_members(&t, 64, &mut rng).unwrap();
    let distinct: HashSet<_> = members.iter().map(|m| &m.realized).collect();
    assert_eq!(distinct.len(), 64);
    assert!(phi::sample_distinct_members(&t, 65, &mut rng).is_err());
}

#[test]
fn clause_reports() {
    let base = UGraph::new(3, [(0, 1)]).unwrap();
    let missing_base = Digraph::new(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
    assert_eq!(
        phi::check_phi_member(&base, &missing_base).unwrap(),
        Some(PhiViolation::BaseContainment { u: 1, v: 0 })
    );
}

proptest! {
    #[test]
    fn built_members_satisfy_clauses(base in arb_ugraph(1, 6), seed in any::<u64>()) {
        let t = phi::compute_t(&base);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bits = phi::random_bits(t.len(), &mut rng);
        let m = phi::build_from_t(&t, &bits).unwrap();
        prop_assert!(satisfies_clauses(&base, &m.realized));
        prop_assert!(phi::is_phi_member(&base, &m.realized).unwrap());
        prop_assert_eq!(phi::index_of_bits(&bits), phi::index_of_bits(&m.bits));
    }

    #[test]
    fn membership_check_agrees_with_clauses(base in arb_ugraph(1, 4), mask in any::<u16>()) {
        let s = common::digraph_from_mask(base.n(), mask as u64);
        prop_assert_eq!(phi::is_phi_member(&base, &s).unwrap(), satisfies_clauses(&base, &s));
    }

    #[test]
    fn distinct_bits_give_distinct_members(base in arb_ugraph(2, 6), seed in any::<u64>()) {
        let t = phi::compute_t(&base);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Some((a, b)) = phi::random_distinct_bits(t.len(), &mut rng) {
            prop_assert_ne!(phi::build_from_t(&t, &a).unwrap().realized, phi::build_from_t(&t, &b).unwrap().realized);
        }
    }

    /// Homs between completions are base endomorphisms, and the identity
    /// never maps one completion into a different one.
    #[test]
    fn completion_homs_fix_the_base(base in arb_ugraph(2, 4), seed in any::<u64>()) {
        let t = phi::compute_t(&base);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Some((a, b)) = phi::random_distinct_bits(t.len(), &mut rng) {
            let (s1, s2) = (phi::build_from_t(&t, &a).unwrap(), phi::build_from_t(&t, &b).unwrap());
            let homs = oracle_homs(&s1.realized, &s2.realized, &[]);
            for f in &homs {
                prop_assert!(is_homomorphism(base.as_digraph(), base.as_digraph(), f));
            }
            let id: Vec<usize> = (0..base.n()).collect();
            prop_assert!(!homs.contains(&id));
            let engine: Vec<Vec<usize>> = enumerate_homs(&HomQuery::new(&s1.realized, &s2.realized))
                .unwrap().into_iter().map(|m| m.image).collect();
            prop_assert_eq!(engine, homs);
        }
    }
}
