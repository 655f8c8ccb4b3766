mod common;

use std::collections::HashSet;

use common::oracle_rigid;
use rigidkit_core::search::{search_rigid, Certification, SearchMode};
use rigidkit_core::symmetrize::all_digraphs;
use rigidkit_core::{is_rigid, Digraph};

#[test]
fn no_rigid_graphs_on_two_to_five_vertices() {
    for n in 2..=5 {
        let r = search_rigid(n, true, SearchMode::Exhaustive).unwrap();
        assert!(r.rigid_found.is_empty(), "n={n}");
        assert_eq!(r.graphs_examined, 1 << (n * (n - 1) / 2));
        assert_eq!(r.certification, Certification::Naive);
    }
}

#[test]
fn directed_exhaustive_matches_oracle() {
    for n in 1..=3 {
        let r = search_rigid(n, false, SearchMode::Exhaustive).unwrap();
        let found: HashSet<Digraph> = r.rigid_found.into_iter().collect();
        let expected: HashSet<Digraph> = all_digraphs(n).into_iter().filter(oracle_rigid).collect();
        assert_eq!(found, expected, "n={n}");
    }
}

#[test]
fn random_search_is_deterministic() {
    let mode = SearchMode::Random { budget: 10_000, seed: 42 };
    let a = search_rigid(5, false, mode).unwrap();
    let b = search_rigid(5, false, mode).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.graphs_examined, 10_000);
    assert!(!a.rigid_found.is_empty());
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    assert_eq!(pool.install(|| search_rigid(5, false, mode).unwrap()), a);
    let other = search_rigid(5, false, SearchMode::Random { budget: 10_000, seed: 43 }).unwrap();
    assert_ne!(other.rigid_found, a.rigid_found);
}

#[test]
fn finds_rigid_graphs_on_eight_vertices() {
    let r = search_rigid(8, true, SearchMode::Random { budget: 50_000, seed: 0 }).unwrap();
    assert!(!r.rigid_found.is_empty());
    let g = &r.rigid_found[0];
    assert!(g.is_symmetric());
    assert!(is_rigid(g).is_rigid());
    assert_eq!(r.certification, Certification::Engine);
}

#[test]
fn isolated_vertex_destroys_rigidity() {
    let r = search_rigid(8, true, SearchMode::Random { budget: 50_000, seed: 0 }).unwrap();
    let g = &r.rigid_found[0];
    let padded = Digraph::new(9, g.edges().iter().copied()).unwrap();
    let cert = is_rigid(&padded);
    assert!(!cert.is_rigid());
    assert!(cert.counterexample.unwrap().image[8] < 8);
}

#[test]
fn out_of_range_requests_are_refused() {
    assert!(search_rigid(0, true, SearchMode::Exhaustive).is_err());
    assert!(search_rigid(8, true, SearchMode::Exhaustive).is_err());
    assert!(search_rigid(6, false, SearchMode::Exhaustive).is_err());
    assert!(search_rigid(65, true, SearchMode::Random { budget: 1, seed: 0 }).is_err());
}
