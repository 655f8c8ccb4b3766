//! Sources of rigid base graphs: transitive tournaments, and exhaustive or
//! randomized search over small labeled (di)graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::brute;
use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::hom;

/// Largest exhaustive search sizes.
pub const EXHAUSTIVE_MAX_SYMMETRIC: usize = 7;
pub const EXHAUSTIVE_MAX_DIRECTED: usize = 5;
/// Largest size adjacency masks support.
pub const SEARCH_MAX_VERTICES: usize = 64;
/// Finds up to this size are re-certified by the naive oracle.
pub const NAIVE_CERTIFY_MAX: usize = 6;
/// Edge probabilities used in turn by random mode.
pub const DENSITIES: [f64; 4] = [0.3, 0.4, 0.5, 0.6];

const CHUNK: u64 = 1 << 12;

/// Edges `(i, j)` for all `i < j`.
pub fn transitive_tournament(n: usize) -> Digraph {
    Digraph::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).expect("edges are in range")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Random { budget: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certification {
    Naive,
    Engine,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub n: usize,
    pub symmetric: bool,
    pub mode: &'static str,
    pub budget: Option<u64>,
    pub seed: Option<u64>,
    pub graphs_examined: u64,
    /// Graphs refuted by a fold before any search.
    pub prefiltered: u64,
    pub rigid_found: Vec<Digraph>,
    pub exhausted: bool,
    pub certification: Certification,
}

/// Edge slots: unordered pairs `u < v` when symmetric, ordered pairs
/// `u != v` otherwise.
fn slots(n: usize, symmetric: bool) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|&(u, v)| if symmetric { u < v } else { u != v }).collect()
}

/// Out- and in-neighbourhoods as bitmasks.
struct Masks {
    out: Vec<u64>,
    inc: Vec<u64>,
}

impl Masks {
    fn new(n: usize, edges: impl Iterator<Item = (usize, usize)>, symmetric: bool) -> Self {
        let mut m = Masks { out: vec![0; n], inc: vec![0; n] };
        for (u, v) in edges {
            m.add(u, v);
            if symmetric {
                m.add(v, u);
            }
        }
        m
    }

    fn add(&mut self, u: usize, v: usize) {
        self.out[u] |= 1 << v;
        self.inc[v] |= 1 << u;
    }

    /// Some `u != v` has `N+(u) <= N+(v)` and `N-(u) <= N-(v)`, so moving
    /// `u` onto `v` is a non-identity endomorphism.
    fn has_fold(&self) -> bool {
        let n = self.out.len();
        (0..n).any(|u| (0..n).any(|v| u != v && self.out[u] & !self.out[v] == 0 && self.inc[u] & !self.inc[v] == 0))
    }
}

fn graph_of(n: usize, edges: impl Iterator<Item = (usize, usize)>, symmetric: bool) -> Digraph {
    let all: Vec<_> = edges.flat_map(|(u, v)| if symmetric { vec![(u, v), (v, u)] } else { vec![(u, v)] }).collect();
    Digraph::new(n, all).expect("slots are in range and loop-free")
}

/// Fold prefilter, then the engine. `None` means refuted by a fold.
fn classify(n: usize, chosen: &[(usize, usize)], symmetric: bool) -> Option<Option<Digraph>> {
    if n > 1 && Masks::new(n, chosen.iter().copied(), symmetric).has_fold() {
        return None;
    }
    let g = graph_of(n, chosen.iter().copied(), symmetric);
    Some(hom::is_rigid(&g).is_rigid().then_some(g))
}

#[derive(Default)]
struct ChunkResult {
    examined: u64,
    prefiltered: u64,
    found: Vec<Digraph>,
}

impl ChunkResult {
    fn record(&mut self, outcome: Option<Option<Digraph>>) {
        self.examined += 1;
        match outcome {
            None => self.prefiltered += 1,
            Some(Some(g)) => self.found.push(g),
            Some(None) => {}
        }
    }
}

pub fn search_rigid(n: usize, symmetric: bool, mode: SearchMode) -> Result<SearchReport> {
    if n == 0 || n > SEARCH_MAX_VERTICES {
        return Err(Error::Refused(format!("search needs 1 to {SEARCH_MAX_VERTICES} vertices, got {n}")));
    }
    let slots = slots(n, symmetric);
    let (chunks, budget, seed): (Vec<ChunkResult>, _, _) = match mode {
        SearchMode::Exhaustive => {
            let cap = if symmetric { EXHAUSTIVE_MAX_SYMMETRIC } else { EXHAUSTIVE_MAX_DIRECTED };
            if n > cap {
                return Err(Error::Refused(format!(
                    "exhaustive search covers at most {cap} vertices ({} graphs); use random mode",
                    if symmetric { "2^21" } else { "2^20" }
                )));
            }
            let total = 1u64 << slots.len();
            let chunk_count = total.div_ceil(CHUNK);
            let chunks = (0..chunk_count)
                .into_par_iter()
                .map(|c| {
                    let mut r = ChunkResult::default();
                    for mask in c * CHUNK..((c + 1) * CHUNK).min(total) {
                        let chosen: Vec<_> =
                            slots.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
                        r.record(classify(n, &chosen, symmetric));
                    }
                    r
                })
                .collect();
            (chunks, None, None)
        }
        SearchMode::Random { budget, seed } => {
            let chunk_count = budget.div_ceil(CHUNK);
            let chunks = (0..chunk_count)
                .into_par_iter()
                .map(|c| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(c);
                    let mut r = ChunkResult::default();
                    for j in c * CHUNK..((c + 1) * CHUNK).min(budget) {
                        let p = DENSITIES[(j % DENSITIES.len() as u64) as usize];
                        let chosen: Vec<_> = slots.iter().copied().filter(|_| rng.gen_bool(p)).collect();
                        r.record(classify(n, &chosen, symmetric));
                    }
                    r
                })
                .collect();
            (chunks, Some(budget), Some(seed))
        }
    };

    let mut graphs_examined = 0;
    let mut prefiltered = 0;
    let mut rigid_found: Vec<Digraph> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for chunk in chunks {
        graphs_examined += chunk.examined;
        prefiltered += chunk.prefiltered;
        for g in chunk.found {
            if seen.insert(g.clone()) {
                rigid_found.push(g);
            }
        }
    }
    let certification = if n <= NAIVE_CERTIFY_MAX { Certification::Naive } else { Certification::Engine };
    for g in &rigid_found {
        let ok = match certification {
            Certification::Naive => brute::is_rigid(g),
            Certification::Engine => hom::is_rigid(g).is_rigid(),
        };
        assert!(ok, "search reported a graph that fails certification");
    }
    Ok(SearchReport {
        n,
        symmetric,
        mode: if budget.is_some() { "random" } else { "exhaustive" },
        budget,
        seed,
        graphs_examined,
        prefiltered,
        rigid_found,
        exhausted: budget.is_none(),
        certification,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tournaments() {
        assert_eq!(transitive_tournament(3).edges(), &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(transitive_tournament(1).edge_count(), 0);
        assert!(hom::is_rigid(&transitive_tournament(5)).is_rigid());
    }

    #[test]
    fn tiny_exhaustive() {
        let one = search_rigid(1, true, SearchMode::Exhaustive).unwrap();
        assert_eq!(one.rigid_found, vec![Digraph::empty(1)]);
        for n in 2..=4 {
            let r = search_rigid(n, true, SearchMode::Exhaustive).unwrap();
            assert!(r.rigid_found.is_empty());
            assert_eq!(r.graphs_examined, 1 << (n * (n - 1) / 2));
            assert!(r.exhausted);
        }
    }

    #[test]
    fn directed_three_has_rigid_graphs() {
        let r = search_rigid(3, false, SearchMode::Exhaustive).unwrap();
        assert!(r.rigid_found.contains(&transitive_tournament(3)));
    }

    #[test]
    fn caps() {
        assert!(matches!(search_rigid(8, true, SearchMode::Exhaustive), Err(Error::Refused(_))));
        assert!(matches!(search_rigid(6, false, SearchMode::Exhaustive), Err(Error::Refused(_))));
        assert!(search_rigid(0, true, SearchMode::Exhaustive).is_err());
    }

    #[test]
    fn fold_prefilter() {
        let path = Masks::new(3, [(0, 1), (1, 2)].into_iter(), true);
        assert!(path.has_fold());
        let t3 = Masks::new(3, [(0, 1), (1, 2), (0, 2)].into_iter(), false);
        assert!(!t3.has_fold());
    }
}
