//! Finite binary relations, induced substructures and their text formats.
//!
//! A [`Digraph`] is an irreflexive relation on `[0, n)` stored as a sorted,
//! duplicate-free list of ordered pairs together with sorted in/out
//! adjacency lists. Every other module works on this one carrier.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

impl Digraph {
    /// Validates and builds a relation. Duplicate pairs are merged.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::OutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::Loop(u));
            }
            set.insert((u, v));
        }
        Ok(Self::from_sorted(n, set.into_iter().collect()))
    }

    /// `n` vertices, no edges.
    pub fn empty(n: usize) -> Self {
        Self::from_sorted(n, Vec::new())
    }

    // Caller guarantees validated, sorted, deduplicated edges.
    fn from_sorted(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for &(u, v) in &edges {
            out[u].push(v);
            inc[v].push(u);
        }
        Digraph { n, edges, out, inc }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.out[u].binary_search(&v).is_ok()
    }

    pub fn out_neighbors(&self, u: usize) -> &[usize] {
        &self.out[u]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    /// In-degree plus out-degree.
    pub fn degree(&self, v: usize) -> usize {
        self.out[v].len() + self.inc[v].len()
    }

    /// Distinct vertices adjacent to `v` in either direction, ascending.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut all: Vec<usize> = self.out[v].iter().chain(&self.inc[v]).copied().collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    /// True when the two vertices are related in at least one direction.
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.has_edge(u, v) || self.has_edge(v, u)
    }

    pub fn is_symmetric(&self) -> bool {
        self.edges.iter().all(|&(u, v)| self.has_edge(v, u))
    }

    /// Restriction to `subset`, relabeled in ascending original order.
    ///
    /// Returns the substructure together with the label map: entry `i` is
    /// the original vertex that became vertex `i`.
    pub fn induced(&self, subset: &[usize]) -> Result<(Digraph, Vec<usize>)> {
        let mut labels: Vec<usize> = subset.to_vec();
        labels.sort_unstable();
        labels.dedup();
        if let Some(&v) = labels.iter().find(|&&v| v >= self.n) {
            return Err(Error::OutOfRange { vertex: v, n: self.n });
        }
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in labels.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in labels.iter().enumerate() {
            for &w in &self.out[v] {
                if local[w] != usize::MAX {
                    edges.push((i, local[w]));
                }
            }
        }
        edges.sort_unstable();
        Ok((Self::from_sorted(labels.len(), edges), labels))
    }

    /// Disjoint blocks of the underlying undirected graph, each ascending,
    /// ordered by smallest member.
    pub fn weak_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut blocks = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut block = Vec::new();
            while let Some(v) = stack.pop() {
                block.push(v);
                for &w in self.out[v].iter().chain(&self.inc[v]) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            block.sort_unstable();
            blocks.push(block);
        }
        blocks
    }

    pub fn is_weakly_connected(&self) -> bool {
        self.weak_components().len() <= 1
    }

    /// Reverses every edge.
    pub fn converse(&self) -> Digraph {
        let mut edges: Vec<_> = self.edges.iter().map(|&(u, v)| (v, u)).collect();
        edges.sort_unstable();
        Self::from_sorted(self.n, edges)
    }

    pub fn symmetric_closure(&self) -> UGraph {
        let mut set: BTreeSet<(usize, usize)> = self.edges.iter().copied().collect();
        set.extend(self.edges.iter().map(|&(u, v)| (v, u)));
        UGraph(Self::from_sorted(self.n, set.into_iter().collect()))
    }

    /// Edge-list text: header `n m`, then one `u v` line per edge, sorted.
    pub fn encode(&self) -> String {
        let mut s = String::with_capacity(8 * (self.edges.len() + 1));
        let _ = writeln!(s, "{} {}", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    pub fn decode(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (line_no, header) = lines
            .by_ref()
            .find(|(_, l)| !l.trim().is_empty())
            .ok_or(Error::Parse { line: 1, message: "missing header".into() })?;
        let (n, m) = parse_pair(header, line_no)?;
        let mut edges = Vec::with_capacity(m);
        for (line_no, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            if edges.len() == m {
                return Err(Error::Parse { line: line_no, message: format!("more than {m} edge lines") });
            }
            let (u, v) = parse_pair(line, line_no)?;
            if u >= n || v >= n {
                return Err(Error::Parse { line: line_no, message: format!("endpoint out of range for {n} vertices") });
            }
            if u == v {
                return Err(Error::Parse { line: line_no, message: format!("loop ({u}, {u})") });
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: text.lines().count().max(1),
                message: format!("header announces {m} edges, found {}", edges.len()),
            });
        }
        Digraph::new(n, edges)
    }

    /// Graphviz rendering with directed `u -> v` edges.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph G {\n");
        for v in 0..self.n {
            let _ = writeln!(s, "  {v};");
        }
        for &(u, v) in &self.edges {
            let _ = writeln!(s, "  {u} -> {v};");
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("digraph serializes")
    }
}

fn parse_pair(line: &str, line_no: usize) -> Result<(usize, usize)> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(Error::Parse { line: line_no, message: format!("expected two integers, got {:?}", line) });
    }
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::Parse { line: line_no, message: format!("not a non-negative integer: {s:?}") })
    };
    Ok((num(parts[0])?, num(parts[1])?))
}

#[derive(Serialize, Deserialize)]
struct DigraphRepr {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl Serialize for Digraph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        DigraphRepr { n: self.n, edges: self.edges.iter().map(|&(u, v)| [u, v]).collect() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Digraph {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = DigraphRepr::deserialize(deserializer)?;
        Digraph::new(repr.n, repr.edges.into_iter().map(|[u, v]| (u, v))).map_err(serde::de::Error::custom)
    }
}

/// A symmetric relation: `(u, v)` present iff `(v, u)` present.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct UGraph(Digraph);

impl UGraph {
    /// Builds from unordered pairs; each pair contributes both directions.
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut both = Vec::new();
        for (u, v) in pairs {
            both.push((u, v));
            both.push((v, u));
        }
        Ok(UGraph(Digraph::new(n, both)?))
    }

    pub fn empty(n: usize) -> Self {
        UGraph(Digraph::empty(n))
    }

    pub fn as_digraph(&self) -> &Digraph {
        &self.0
    }

    pub fn into_digraph(self) -> Digraph {
        self.0
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    /// Each undirected edge once, as `(min, max)`, sorted.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.0.edges.iter().copied().filter(|&(u, v)| u < v).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.0.has_edge(u, v)
    }

    pub fn is_connected(&self) -> bool {
        self.0.is_weakly_connected()
    }
}

impl TryFrom<Digraph> for UGraph {
    type Error = Error;

    fn try_from(g: Digraph) -> Result<Self> {
        if g.is_symmetric() {
            Ok(UGraph(g))
        } else {
            Err(Error::Arity("relation is not symmetric".into()))
        }
    }
}

impl AsRef<Digraph> for UGraph {
    fn as_ref(&self) -> &Digraph {
        &self.0
    }
}

/// A total map from a sorted vertex subset into some target vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexMap {
    pub domain: Vec<usize>,
    pub image: Vec<usize>,
}

impl VertexMap {
    pub fn new(domain: Vec<usize>, image: Vec<usize>) -> Result<Self> {
        if domain.len() != image.len() {
            return Err(Error::Arity(format!("domain has {} vertices, image {}", domain.len(), image.len())));
        }
        if domain.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Arity("domain must be strictly ascending".into()));
        }
        Ok(VertexMap { domain, image })
    }

    /// A map on `[0, image.len())`.
    pub fn from_assignment(image: Vec<usize>) -> Self {
        VertexMap { domain: (0..image.len()).collect(), image }
    }

    pub fn identity(domain: Vec<usize>) -> Self {
        VertexMap { image: domain.clone(), domain }
    }

    pub fn get(&self, v: usize) -> Option<usize> {
        self.domain.binary_search(&v).ok().map(|i| self.image[i])
    }

    pub fn is_identity(&self) -> bool {
        self.domain == self.image
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    /// `(v, f(v))` pairs in domain order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.domain.iter().copied().zip(self.image.iter().copied())
    }
}
