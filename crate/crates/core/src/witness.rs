//! Bounded witness-set conditions and the witness collision finder.
//!
//! A *diamond* check asks that for every vertex `x` the only homomorphism
//! from the substructure induced on `A(x)` into the whole structure is the
//! inclusion. A *star* check asks, for every ordered pair `x != y`, that no
//! homomorphism from the substructure on `A(x, y)` sends `x` to `y`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::disjoint::UnionStructure;
use crate::error::{Error, Result};
use crate::graph::{Digraph, VertexMap};
use crate::hom::{self, HomQuery};

/// A relational structure with a designated partition into components.
pub trait Structure: Sync {
    fn graph(&self) -> &Digraph;
    /// The witness blocks used by [`WitnessProvider::Component`].
    fn components(&self) -> Vec<Vec<usize>>;
}

impl Structure for Digraph {
    fn graph(&self) -> &Digraph {
        self
    }

    fn components(&self) -> Vec<Vec<usize>> {
        self.weak_components()
    }
}

impl Structure for UnionStructure {
    fn graph(&self) -> &Digraph {
        self.flat()
    }

    fn components(&self) -> Vec<Vec<usize>> {
        self.blocks()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessProvider {
    /// The component containing `x`.
    Component,
    /// The whole vertex set.
    Full,
    /// `A(x)` given per vertex; for star checks `A(x, y) := A(x)`.
    PerVertex(Vec<Vec<usize>>),
    /// `A(x, y)` given per ordered pair; star checks only.
    PerPair(BTreeMap<(usize, usize), Vec<usize>>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessBound {
    pub k: usize,
    pub strict: bool,
}

impl WitnessBound {
    pub fn new(k: usize, strict: bool) -> Self {
        WitnessBound { k, strict }
    }

    pub fn admits(&self, size: usize) -> bool {
        if self.strict {
            size < self.k
        } else {
            size <= self.k
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessMode {
    Diamond,
    Star,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessEntry {
    pub vertex: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<usize>,
    pub witness: Vec<usize>,
    pub passed: bool,
    pub counterexample: Option<VertexMap>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub mode: WitnessMode,
    pub k: usize,
    pub strict: bool,
    pub entries: Vec<WitnessEntry>,
    pub passed: bool,
}

impl WitnessReport {
    pub fn failures(&self) -> impl Iterator<Item = &WitnessEntry> {
        self.entries.iter().filter(|e| !e.passed)
    }
}

/// Whether searches may be confined to single weak components of the host.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Confinement {
    /// Confine when the witness relates every pair of its vertices.
    Auto,
    Off,
}

pub fn verify_diamond(s: &impl Structure, provider: &WitnessProvider, bound: WitnessBound) -> Result<WitnessReport> {
    verify_diamond_with(s, provider, bound, Confinement::Auto)
}

pub fn verify_star(s: &impl Structure, provider: &WitnessProvider, bound: WitnessBound) -> Result<WitnessReport> {
    verify_star_with(s, provider, bound, Confinement::Auto)
}

pub fn verify_diamond_with(
    s: &impl Structure,
    provider: &WitnessProvider,
    bound: WitnessBound,
    confinement: Confinement,
) -> Result<WitnessReport> {
    let g = s.graph();
    let per_vertex = resolve_per_vertex(s, provider, "diamond")?;
    for (x, w) in per_vertex.iter().enumerate() {
        validate_witness(g, x, w, bound)?;
    }
    let host = Host::new(g, confinement);
    let cache = WitnessCache::build(g, per_vertex.iter());
    let verdicts: HashMap<&[usize], Option<VertexMap>> =
        cache.distinct().par_iter().map(|&w| (w, host.diamond_counterexample(w, cache.get(w)))).collect();
    let entries: Vec<WitnessEntry> = per_vertex
        .iter()
        .enumerate()
        .map(|(x, w)| {
            let counterexample = verdicts[w.as_slice()].clone();
            WitnessEntry {
                vertex: x,
                target: None,
                witness: w.clone(),
                passed: counterexample.is_none(),
                counterexample,
            }
        })
        .collect();
    Ok(report(WitnessMode::Diamond, bound, entries))
}

pub fn verify_star_with(
    s: &impl Structure,
    provider: &WitnessProvider,
    bound: WitnessBound,
    confinement: Confinement,
) -> Result<WitnessReport> {
    let g = s.graph();
    let n = g.n();
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y))).collect();
    let witnesses: Vec<Vec<usize>> = match provider {
        WitnessProvider::PerPair(map) => pairs
            .iter()
            .map(|p| {
                map.get(p)
                    .map(|w| normalized(w))
                    .ok_or_else(|| Error::WitnessInvalid(format!("no witness for the pair ({}, {})", p.0, p.1)))
            })
            .collect::<Result<_>>()?,
        _ => {
            let per_vertex = resolve_per_vertex(s, provider, "star")?;
            pairs.iter().map(|&(x, _)| per_vertex[x].clone()).collect()
        }
    };
    for (&(x, _), w) in pairs.iter().zip(&witnesses) {
        validate_witness(g, x, w, bound)?;
    }
    let host = Host::new(g, confinement);
    let cache = WitnessCache::build(g, witnesses.iter());
    let entries: Vec<WitnessEntry> = pairs
        .par_iter()
        .zip(&witnesses)
        .map(|(&(x, y), w)| {
            let counterexample = host.star_counterexample(w, cache.get(w), x, y);
            WitnessEntry {
                vertex: x,
                target: Some(y),
                witness: w.clone(),
                passed: counterexample.is_none(),
                counterexample,
            }
        })
        .collect();
    Ok(report(WitnessMode::Star, bound, entries))
}

fn report(mode: WitnessMode, bound: WitnessBound, entries: Vec<WitnessEntry>) -> WitnessReport {
    let passed = entries.iter().all(|e| e.passed);
    WitnessReport { mode, k: bound.k, strict: bound.strict, entries, passed }
}

fn normalized(w: &[usize]) -> Vec<usize> {
    let mut w = w.to_vec();
    w.sort_unstable();
    w.dedup();
    w
}

fn resolve_per_vertex(s: &impl Structure, provider: &WitnessProvider, mode: &str) -> Result<Vec<Vec<usize>>> {
    let n = s.graph().n();
    match provider {
        WitnessProvider::Component => {
            let mut per_vertex = vec![Vec::new(); n];
            for block in s.components() {
                for &x in &block {
                    per_vertex[x] = block.clone();
                }
            }
            Ok(per_vertex)
        }
        WitnessProvider::Full => Ok(vec![(0..n).collect(); n]),
        WitnessProvider::PerVertex(sets) => {
            if sets.len() != n {
                return Err(Error::WitnessInvalid(format!("{} witness sets given for {n} vertices", sets.len())));
            }
            Ok(sets.iter().map(|w| normalized(w)).collect())
        }
        WitnessProvider::PerPair(_) => {
            Err(Error::WitnessInvalid(format!("per-pair witnesses do not apply to {mode} checks")))
        }
    }
}

fn validate_witness(g: &Digraph, x: usize, w: &[usize], bound: WitnessBound) -> Result<()> {
    if let Some(&v) = w.iter().find(|&&v| v >= g.n()) {
        return Err(Error::WitnessInvalid(format!("witness of {x} contains vertex {v} >= {}", g.n())));
    }
    if w.binary_search(&x).is_err() {
        return Err(Error::WitnessInvalid(format!("witness of {x} does not contain {x}")));
    }
    if !bound.admits(w.len()) {
        let rel = if bound.strict { "<" } else { "<=" };
        return Err(Error::WitnessInvalid(format!(
            "witness of {x} has {} vertices, bound requires {rel} {}",
            w.len(),
            bound.k
        )));
    }
    Ok(())
}

struct Local {
    graph: Digraph,
    /// Every pair of distinct vertices is related in some direction.
    complete: bool,
}

/// Induced substructures, built once per distinct witness set.
struct WitnessCache<'w> {
    locals: HashMap<&'w [usize], Local>,
    order: Vec<&'w [usize]>,
}

impl<'w> WitnessCache<'w> {
    fn build(g: &Digraph, witnesses: impl Iterator<Item = &'w Vec<usize>>) -> Self {
        let mut locals = HashMap::new();
        let mut order = Vec::new();
        for w in witnesses {
            locals.entry(w.as_slice()).or_insert_with(|| {
                order.push(w.as_slice());
                let (graph, _) = g.induced(w).expect("validated witness");
                let complete = (0..graph.n()).all(|a| (a + 1..graph.n()).all(|b| graph.adjacent(a, b)));
                Local { graph, complete }
            });
        }
        WitnessCache { locals, order }
    }

    fn distinct(&self) -> &[&'w [usize]] {
        &self.order
    }

    fn get(&self, w: &[usize]) -> &Local {
        &self.locals[w]
    }
}

struct Host<'g> {
    graph: &'g Digraph,
    confinement: Confinement,
    /// Weak components with their induced graphs, and each vertex's
    /// component index.
    parts: Vec<(Vec<usize>, Digraph)>,
    part_of: Vec<usize>,
}

impl<'g> Host<'g> {
    fn new(graph: &'g Digraph, confinement: Confinement) -> Self {
        let mut part_of = vec![0; graph.n()];
        let parts: Vec<(Vec<usize>, Digraph)> = match confinement {
            Confinement::Off => Vec::new(),
            Confinement::Auto => graph
                .weak_components()
                .into_iter()
                .enumerate()
                .map(|(i, block)| {
                    block.iter().for_each(|&v| part_of[v] = i);
                    let (sub, _) = graph.induced(&block).expect("component vertices are in range");
                    (block, sub)
                })
                .collect(),
        };
        Host { graph, confinement, parts, part_of }
    }

    fn confines(&self, local: &Local) -> bool {
        self.confinement == Confinement::Auto && local.complete
    }

    /// Up to `limit` homs from `local` into the host, in global coordinates,
    /// with an optional pin given as (local source, global target).
    fn homs(&self, local: &Local, pin: Option<(usize, usize)>, limit: usize) -> Vec<Vec<usize>> {
        if !self.confines(local) {
            let mut q = HomQuery::new(&local.graph, self.graph).limit(limit);
            if let Some((a, t)) = pin {
                q = q.pin(a, t);
            }
            return hom::search(&q).expect("validated query").maps;
        }
        // The witness relates all its pairs, so a hom is injective and its
        // image stays inside one weak component.
        let candidates: Vec<usize> = match pin {
            Some((_, t)) => vec![self.part_of[t]],
            None => (0..self.parts.len()).collect(),
        };
        let mut found = Vec::new();
        for p in candidates {
            let (block, sub) = &self.parts[p];
            if block.len() < local.graph.n() {
                continue;
            }
            let mut q = HomQuery::new(&local.graph, sub).limit(limit - found.len());
            if let Some((a, t)) = pin {
                q = q.pin(a, block.binary_search(&t).expect("pin target in its component"));
            }
            let maps = hom::search(&q).expect("validated query").maps;
            found.extend(maps.into_iter().map(|m| m.into_iter().map(|i| block[i]).collect::<Vec<_>>()));
            if found.len() >= limit {
                break;
            }
        }
        found
    }

    fn diamond_counterexample(&self, w: &[usize], local: &Local) -> Option<VertexMap> {
        let maps = self.homs(local, None, 2);
        let bad = maps.into_iter().find(|m| m.as_slice() != w)?;
        assert!(hom::is_homomorphism(&local.graph, self.graph, &bad), "counterexample must be a homomorphism");
        Some(VertexMap::new(w.to_vec(), bad).expect("domain and image agree in length"))
    }

    fn star_counterexample(&self, w: &[usize], local: &Local, x: usize, y: usize) -> Option<VertexMap> {
        let a = w.binary_search(&x).expect("validated witness contains x");
        let bad = self.homs(local, Some((a, y)), 1).into_iter().next()?;
        assert!(hom::is_homomorphism(&local.graph, self.graph, &bad) && bad[a] == y);
        Some(VertexMap::new(w.to_vec(), bad).expect("domain and image agree in length"))
    }
}

/// A witness set under its ascending enumeration, with the relation it
/// induces on `[0, |B|)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalRelation {
    pub witness: Vec<usize>,
    pub relation: Digraph,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Collision {
    /// Indices into the witness list.
    pub first: usize,
    pub second: usize,
    /// Sends the `i`-th vertex of the first witness to the `i`-th of the
    /// second.
    pub map: VertexMap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollisionResult {
    pub locals: Vec<LocalRelation>,
    pub collision: Option<Collision>,
}

/// Groups witnesses by size and induced local relation and reports the
/// first pair of distinct witnesses that agree.
pub fn find_witness_collision(s: &impl Structure, witnesses: &[Vec<usize>]) -> Result<CollisionResult> {
    let g = s.graph();
    let mut locals = Vec::with_capacity(witnesses.len());
    for (i, w) in witnesses.iter().enumerate() {
        if w.is_empty() {
            return Err(Error::WitnessInvalid(format!("witness {i} is empty")));
        }
        let witness = normalized(w);
        let (relation, _) = g.induced(&witness)?;
        locals.push(LocalRelation { witness, relation });
    }
    // Keyed by witness size and local edge list.
    let mut seen: HashMap<_, usize> = HashMap::new();
    let mut collision = None;
    for (j, local) in locals.iter().enumerate() {
        let key = (local.witness.len(), local.relation.edges());
        match seen.get(&key) {
            Some(&i) if locals[i].witness != local.witness => {
                collision = Some(verified_collision(g, &locals, i, j));
                break;
            }
            Some(_) => {}
            None => {
                seen.insert(key, j);
            }
        }
    }
    Ok(CollisionResult { locals, collision })
}

fn verified_collision(g: &Digraph, locals: &[LocalRelation], i: usize, j: usize) -> Collision {
    let (a, b) = (&locals[i], &locals[j]);
    let (sub_a, _) = g.induced(&a.witness).expect("validated witness");
    let (sub_b, _) = g.induced(&b.witness).expect("validated witness");
    let pinned_identity = |from: &Digraph, to: &Digraph| {
        let mut q = HomQuery::new(from, to);
        for v in 0..from.n() {
            q = q.pin(v, v);
        }
        hom::count_homs(&q).expect("sizes agree") == 1
    };
    assert!(pinned_identity(&sub_a, &sub_b) && pinned_identity(&sub_b, &sub_a), "collision must be an isomorphism");
    let map = VertexMap::new(a.witness.clone(), b.witness.clone()).expect("equal sizes");
    assert!(!map.is_identity());
    assert!(hom::is_homomorphism(&sub_a, g, &b.witness));
    Collision { first: i, second: j, map }
}

/// Contents of a witness file. Each non-blank line not starting with `#`
/// is one of
///
/// ```text
/// x: a b c      A(x) = {a, b, c}
/// x y: a b c    A(x, y) = {a, b, c}
/// a b c         a bare witness set
/// ```
///
/// and all lines of a file must be of the same kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessFile {
    PerVertex(Vec<Vec<usize>>),
    PerPair(BTreeMap<(usize, usize), Vec<usize>>),
    Sets(Vec<Vec<usize>>),
}

impl WitnessFile {
    /// `n` is the vertex count of the structure; per-vertex files must
    /// cover every vertex exactly once.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut per_vertex: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut per_pair = BTreeMap::new();
        let mut sets = Vec::new();
        let mut kind = None;
        let mut last_line = 0;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = i + 1;
            last_line = lineno;
            let err = |message: String| Error::Parse { line: lineno, message };
            let numbers = |s: &str| -> Result<Vec<usize>> {
                s.split_whitespace()
                    .map(|t| t.parse::<usize>().map_err(|_| err(format!("expected a vertex, found {t:?}"))))
                    .collect()
            };
            let (key, set) = match line.split_once(':') {
                Some((k, v)) => (Some(numbers(k)?), numbers(v)?),
                None => (None, numbers(line)?),
            };
            let this = key.as_ref().map_or(0, Vec::len);
            if this > 2 {
                return Err(err("a key is one vertex or one ordered pair".into()));
            }
            if *kind.get_or_insert(this) != this {
                return Err(err("lines of different kinds are mixed".into()));
            }
            if set.is_empty() {
                return Err(err("empty witness set".into()));
            }
            let set = normalized(&set);
            match key.as_deref() {
                Some(&[x]) => {
                    if per_vertex.insert(x, set).is_some() {
                        return Err(err(format!("vertex {x} given twice")));
                    }
                }
                Some(&[x, y]) => {
                    if per_pair.insert((x, y), set).is_some() {
                        return Err(err(format!("pair ({x}, {y}) given twice")));
                    }
                }
                _ => sets.push(set),
            }
        }
        match kind {
            Some(1) => {
                if per_vertex.keys().copied().ne(0..n) {
                    return Err(Error::Parse {
                        line: last_line,
                        message: format!("per-vertex witnesses must cover vertices 0..{n} exactly"),
                    });
                }
                Ok(WitnessFile::PerVertex(per_vertex.into_values().collect()))
            }
            Some(2) => Ok(WitnessFile::PerPair(per_pair)),
            _ => Ok(WitnessFile::Sets(sets)),
        }
    }

    /// The provider for diamond and star checks; bare sets have none.
    pub fn provider(self) -> Option<WitnessProvider> {
        match self {
            WitnessFile::PerVertex(v) => Some(WitnessProvider::PerVertex(v)),
            WitnessFile::PerPair(p) => Some(WitnessProvider::PerPair(p)),
            WitnessFile::Sets(_) => None,
        }
    }
}
