//! Homomorphism enumeration by backtracking over candidate bitsets.
//!
//! Source vertices are assigned in a static greedy order (pins first, then
//! most already-ordered neighbours, then degree, then lower index). Every
//! unassigned vertex carries a candidate bitset over target vertices, or no
//! bitset while nothing constrains it. Assigning `u -> t` intersects the
//! candidates of each unassigned out-neighbour of `u` with the out-neighbours
//! of `t` (and symmetrically for in-neighbours); any set that shrinks is then
//! propagated to arc consistency among unassigned vertices. An empty set cuts
//! the branch. Edges between two assigned vertices never need re-checking.
//!
//! Before the search, each source vertex loses the target vertices whose
//! bidirected-clique level is lower than its own: a bidirected clique maps
//! injectively, so levels can only grow along a homomorphism.
//!
//! Large queries split the first vertex's candidates across rayon workers.
//! Branch results are merged in candidate order, so the output (including
//! the node counter) is the same as a sequential run.

use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::graph::{Digraph, VertexMap};

const UNASSIGNED: usize = usize::MAX;
const PARALLEL_MIN_TARGET: usize = 48;
const PARALLEL_MIN_CANDIDATES: usize = 4;

/// A homomorphism search problem.
#[derive(Clone, Debug)]
pub struct HomQuery<'a> {
    pub source: &'a Digraph,
    pub target: &'a Digraph,
    pub pins: Vec<(usize, usize)>,
    pub limit: Option<usize>,
}

impl<'a> HomQuery<'a> {
    pub fn new(source: &'a Digraph, target: &'a Digraph) -> Self {
        HomQuery { source, target, pins: Vec::new(), limit: None }
    }

    /// Require `f(u) = v`.
    pub fn pin(mut self, u: usize, v: usize) -> Self {
        self.pins.push((u, v));
        self
    }

    pub fn limit(mut self, limit: usize) -> Self {
        self.limit = Some(limit);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = vec![UNASSIGNED; self.source.n()];
        for &(u, v) in &self.pins {
            if u >= self.source.n() {
                return Err(Error::InvalidQuery(format!(
                    "pin source {u} out of range for {} vertices",
                    self.source.n()
                )));
            }
            if v >= self.target.n() {
                return Err(Error::InvalidQuery(format!(
                    "pin target {v} out of range for {} vertices",
                    self.target.n()
                )));
            }
            if seen[u] != UNASSIGNED && seen[u] != v {
                return Err(Error::InvalidQuery(format!("vertex {u} pinned twice")));
            }
            seen[u] = v;
        }
        Ok(())
    }
}

/// Raw search output: assignment vectors in search order plus the number
/// of single-vertex assignments made before the search stopped.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchOutcome {
    pub maps: Vec<Vec<usize>>,
    pub nodes: u64,
}

/// All homomorphisms matching the query, sorted lexicographically by
/// assignment vector.
///
/// With a limit, the first `limit` maps in search order are kept and then
/// sorted.
pub fn enumerate_homs(query: &HomQuery) -> Result<Vec<VertexMap>> {
    let mut maps = search(query)?.maps;
    maps.sort_unstable();
    Ok(maps.into_iter().map(VertexMap::from_assignment).collect())
}

pub fn count_homs(query: &HomQuery) -> Result<usize> {
    Ok(search(query)?.maps.len())
}

/// Whether any homomorphism `source -> target` exists.
pub fn hom_exists(source: &Digraph, target: &Digraph) -> bool {
    !search(&HomQuery::new(source, target).limit(1)).expect("unpinned query is valid").maps.is_empty()
}

/// Direct edge-preservation check of an assignment vector.
pub fn is_homomorphism(source: &Digraph, target: &Digraph, image: &[usize]) -> bool {
    image.len() == source.n()
        && image.iter().all(|&t| t < target.n())
        && source.edges().iter().all(|&(a, b)| target.has_edge(image[a], image[b]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Rigid,
    NotRigid,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RigidityCertificate {
    pub verdict: Verdict,
    pub counterexample: Option<VertexMap>,
    pub maps_examined: u64,
}

impl RigidityCertificate {
    pub fn is_rigid(&self) -> bool {
        self.verdict == Verdict::Rigid
    }
}

/// Rigid iff the identity is the only endomorphism. The counterexample is
/// the first non-identity endomorphism in search order.
pub fn is_rigid(g: &Digraph) -> RigidityCertificate {
    let outcome = search(&HomQuery::new(g, g).limit(2)).expect("unpinned query is valid");
    let counterexample =
        outcome.maps.into_iter().find(|m| m.iter().enumerate().any(|(v, &t)| v != t)).map(VertexMap::from_assignment);
    RigidityCertificate {
        verdict: if counterexample.is_some() { Verdict::NotRigid } else { Verdict::Rigid },
        counterexample,
        maps_examined: outcome.nodes,
    }
}

/// Runs the backtracking search, returning maps in search order.
pub fn search(query: &HomQuery) -> Result<SearchOutcome> {
    query.validate()?;
    let source = query.source;
    let target = query.target;
    let limit = query.limit.unwrap_or(usize::MAX);
    if limit == 0 {
        return Ok(SearchOutcome::default());
    }
    if source.n() == 0 {
        return Ok(SearchOutcome { maps: vec![Vec::new()], nodes: 0 });
    }
    if target.n() == 0 {
        return Ok(SearchOutcome::default());
    }

    let mut pinned = vec![false; source.n()];
    let mut domains: Vec<Option<Bitset>> = vec![None; source.n()];
    for &(u, v) in &query.pins {
        pinned[u] = true;
        domains[u] = Some(Bitset::from_iter(target.n(), [v]));
    }
    apply_clique_filter(source, target, &mut domains);
    let order = search_order(source, &pinned);
    let mut root = Searcher {
        source,
        target,
        order: &order,
        assign: vec![UNASSIGNED; source.n()],
        domains,
        trail: Vec::new(),
        nodes: 0,
        limit,
        maps: Vec::new(),
        nodes_at: Vec::new(),
    };

    let constrained: Vec<usize> = (0..source.n()).filter(|&v| root.domains[v].is_some()).collect();
    if constrained.iter().any(|&v| root.domains[v].as_ref().is_some_and(Bitset::is_empty))
        || !root.propagate(constrained)
    {
        return Ok(SearchOutcome::default());
    }
    root.trail.clear();

    let first_candidates = root.candidates(order[0]);
    if target.n() < PARALLEL_MIN_TARGET || first_candidates.len() < PARALLEL_MIN_CANDIDATES {
        let mut s = root;
        s.descend(0);
        return Ok(SearchOutcome { maps: s.maps, nodes: s.nodes });
    }

    let branches: Vec<Branch> = first_candidates
        .par_iter()
        .map(|&t| {
            let mut s = root.clone();
            s.branch(order[0], t, 0);
            Branch { maps: s.maps, nodes_at: s.nodes_at, nodes: s.nodes }
        })
        .collect();

    let mut out = SearchOutcome::default();
    for branch in branches {
        let remaining = limit - out.maps.len();
        if branch.maps.len() >= remaining {
            out.nodes += branch.nodes_at[remaining - 1];
            out.maps.extend(branch.maps.into_iter().take(remaining));
            break;
        }
        out.nodes += branch.nodes;
        out.maps.extend(branch.maps);
    }
    Ok(out)
}

struct Branch {
    maps: Vec<Vec<usize>>,
    nodes_at: Vec<u64>,
    nodes: u64,
}

/// Size (capped at 4) of the largest clique of mutually two-way-related
/// vertices containing each vertex. Such cliques map injectively onto
/// cliques of the same kind, so the level can only grow under a
/// homomorphism.
fn clique_levels(g: &Digraph) -> Vec<u8> {
    let mutual: Vec<Vec<usize>> =
        (0..g.n()).map(|v| g.out_neighbors(v).iter().copied().filter(|&w| g.has_edge(w, v)).collect()).collect();
    let linked = |a: usize, b: usize| mutual[a].binary_search(&b).is_ok();
    (0..g.n())
        .map(|v| {
            let nb = &mutual[v];
            let mut level = if nb.is_empty() { 1 } else { 2 };
            for (i, &a) in nb.iter().enumerate() {
                for (j, &b) in nb.iter().enumerate().skip(i + 1) {
                    if !linked(a, b) {
                        continue;
                    }
                    level = 3;
                    if nb[j + 1..].iter().any(|&c| linked(a, c) && linked(b, c)) {
                        return 4;
                    }
                }
            }
            level
        })
        .collect()
}

const CLIQUE_FILTER_MAX_DEGREE: usize = 256;

fn apply_clique_filter(source: &Digraph, target: &Digraph, domains: &mut [Option<Bitset>]) {
    let max_degree = |g: &Digraph| (0..g.n()).map(|v| g.out_neighbors(v).len()).max().unwrap_or(0);
    if max_degree(target) > CLIQUE_FILTER_MAX_DEGREE || max_degree(source) > CLIQUE_FILTER_MAX_DEGREE {
        return;
    }
    let source_levels = clique_levels(source);
    if source_levels.iter().all(|&l| l < 3) {
        return;
    }
    let target_levels = clique_levels(target);
    for (u, &level) in source_levels.iter().enumerate() {
        if level < 3 {
            continue;
        }
        let allowed = Bitset::from_iter(target.n(), (0..target.n()).filter(|&t| target_levels[t] >= level));
        match &mut domains[u] {
            Some(d) => d.intersect_with(&allowed),
            None => domains[u] = Some(allowed),
        }
    }
}

fn search_order(source: &Digraph, pinned: &[bool]) -> Vec<usize> {
    let n = source.n();
    let neighbors: Vec<Vec<usize>> = (0..n).map(|v| source.neighbors(v)).collect();
    let mut placed = vec![false; n];
    let mut links = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n).find(|&v| pinned[v] && !placed[v]).unwrap_or_else(|| {
            (0..n)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| (links[v] > 0, source.degree(v), links[v], std::cmp::Reverse(v)))
                .expect("unplaced vertex remains")
        });
        placed[next] = true;
        order.push(next);
        for &w in &neighbors[next] {
            links[w] += 1;
        }
    }
    order
}

#[derive(Clone)]
struct Searcher<'a> {
    source: &'a Digraph,
    target: &'a Digraph,
    order: &'a [usize],
    assign: Vec<usize>,
    domains: Vec<Option<Bitset>>,
    trail: Vec<(usize, Option<Bitset>)>,
    nodes: u64,
    limit: usize,
    maps: Vec<Vec<usize>>,
    nodes_at: Vec<u64>,
}

impl<'a> Searcher<'a> {
    fn candidates(&self, u: usize) -> Vec<usize> {
        let needs_out = !self.source.out_neighbors(u).is_empty();
        let needs_in = !self.source.in_neighbors(u).is_empty();
        let ok = |t: &usize| {
            (!needs_out || !self.target.out_neighbors(*t).is_empty())
                && (!needs_in || !self.target.in_neighbors(*t).is_empty())
        };
        match &self.domains[u] {
            Some(d) => d.iter().filter(ok).collect(),
            None => (0..self.target.n()).filter(ok).collect(),
        }
    }

    /// Returns true once the limit is reached.
    fn descend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            self.maps.push(self.assign.clone());
            self.nodes_at.push(self.nodes);
            return self.maps.len() >= self.limit;
        }
        let u = self.order[depth];
        for t in self.candidates(u) {
            if self.branch(u, t, depth) {
                return true;
            }
        }
        false
    }

    fn branch(&mut self, u: usize, t: usize, depth: usize) -> bool {
        self.nodes += 1;
        self.assign[u] = t;
        let mark = self.trail.len();
        let stop = self.forward_check(u, t) && self.descend(depth + 1);
        while self.trail.len() > mark {
            let (w, old) = self.trail.pop().expect("trail above mark");
            self.domains[w] = old;
        }
        self.assign[u] = UNASSIGNED;
        stop
    }

    fn forward_check(&mut self, u: usize, t: usize) -> bool {
        let (source, target) = (self.source, self.target);
        let mut queue = Vec::new();
        for &w in source.out_neighbors(u) {
            if self.assign[w] == UNASSIGNED {
                match self.restrict(w, |next| target.out_neighbors(t).iter().for_each(|&x| next.insert(x))) {
                    Revision::Wiped => return false,
                    Revision::Shrunk => queue.push(w),
                    Revision::Unchanged => {}
                }
            }
        }
        for &w in source.in_neighbors(u) {
            if self.assign[w] == UNASSIGNED {
                match self.restrict(w, |next| target.in_neighbors(t).iter().for_each(|&x| next.insert(x))) {
                    Revision::Wiped => return false,
                    Revision::Shrunk => queue.push(w),
                    Revision::Unchanged => {}
                }
            }
        }
        self.propagate(queue)
    }

    /// Arc consistency over unassigned vertices, starting from the vertices
    /// whose candidate sets just shrank.
    fn propagate(&mut self, mut queue: Vec<usize>) -> bool {
        let (source, target) = (self.source, self.target);
        while let Some(x) = queue.pop() {
            let Some(dx) = &self.domains[x] else { continue };
            let mut revisions = Vec::new();
            for (forward, neighbours) in [(true, source.out_neighbors(x)), (false, source.in_neighbors(x))] {
                if neighbours.iter().all(|&w| self.assign[w] != UNASSIGNED) {
                    continue;
                }
                let mut support = Bitset::new(target.n());
                for s in dx.iter() {
                    let adj = if forward { target.out_neighbors(s) } else { target.in_neighbors(s) };
                    adj.iter().for_each(|&y| support.insert(y));
                }
                revisions.push((neighbours, support));
            }
            for (neighbours, support) in revisions {
                for &w in neighbours {
                    if self.assign[w] != UNASSIGNED {
                        continue;
                    }
                    match self.restrict(w, |next| next.union_with(&support)) {
                        Revision::Wiped => return false,
                        Revision::Shrunk => {
                            if !queue.contains(&w) {
                                queue.push(w);
                            }
                        }
                        Revision::Unchanged => {}
                    }
                }
            }
        }
        true
    }

    /// Intersects the candidates of `w` with the set built by `allowed`.
    fn restrict(&mut self, w: usize, allowed: impl FnOnce(&mut Bitset)) -> Revision {
        let mut next = Bitset::new(self.target.n());
        allowed(&mut next);
        let changed = match &self.domains[w] {
            None => true,
            Some(d) => {
                next.intersect_with(d);
                next.len() != d.len()
            }
        };
        if !changed {
            return Revision::Unchanged;
        }
        let wiped = next.is_empty();
        let old = self.domains[w].replace(next);
        self.trail.push((w, old));
        if wiped {
            Revision::Wiped
        } else {
            Revision::Shrunk
        }
    }
}

enum Revision {
    Unchanged,
    Shrunk,
    Wiped,
}
