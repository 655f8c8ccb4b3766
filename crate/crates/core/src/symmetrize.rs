//! Digraph to undirected-graph transformation with certified faithfulness.
//!
//! `symmetrize(d)` consists of one shared *frame* graph, one *carrier*
//! vertex per vertex of `d`, and one fresh copy of the arc gadget per arc
//! whose tail anchor is identified with the tail's carrier and whose head
//! anchor with the head's carrier. Carriers and gadget interiors are also
//! joined to fixed frame vertices. The frame is rigid, and each attachment
//! set is a frame edge lying in no frame triangle, so a homomorphism that
//! fixes the frame must keep carriers on carriers and gadget vertices on
//! gadget vertices of the same role. Homomorphisms of the result then
//! correspond exactly to homomorphisms of `d`; the sweeps in this module
//! check that correspondence by exhaustive counting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Digraph, UGraph};
use crate::hom::{self, HomQuery};

/// Largest digraph `verify_faithful` accepts on either side.
pub const FAITHFUL_MAX_VERTICES: usize = 4;

/// Hom counts above this are reported as capped.
const COUNT_CAP: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GadgetScheme {
    pub frame: UGraph,
    /// Frame vertices every carrier is joined to.
    pub carrier_attach: Vec<usize>,
    /// Arc gadget including both anchors.
    pub gadget: UGraph,
    pub tail: usize,
    pub head: usize,
    /// Frame vertices each gadget vertex is joined to; empty for anchors.
    pub gadget_attach: Vec<Vec<usize>>,
}

impl GadgetScheme {
    /// Checks structural sanity and certifies, with the hom engine, that the
    /// frame is rigid and the single-arc image is connected and rigid (so no
    /// automorphism exchanges the anchors).
    pub fn new(
        frame: UGraph,
        carrier_attach: Vec<usize>,
        gadget: UGraph,
        tail: usize,
        head: usize,
        gadget_attach: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let scheme = GadgetScheme { frame, carrier_attach, gadget, tail, head, gadget_attach };
        scheme.validate()?;
        Ok(scheme)
    }

    fn validate(&self) -> Result<()> {
        let f = self.frame.n();
        let g = self.gadget.n();
        if self.tail >= g || self.head >= g || self.tail == self.head {
            return Err(Error::Scheme("anchors must be two distinct gadget vertices".into()));
        }
        if self.gadget_attach.len() != g {
            return Err(Error::Scheme(format!(
                "{} attachment lists for {} gadget vertices",
                self.gadget_attach.len(),
                g
            )));
        }
        if !self.gadget_attach[self.tail].is_empty() || !self.gadget_attach[self.head].is_empty() {
            return Err(Error::Scheme("anchors carry the carrier attachment only".into()));
        }
        let all_attach = self.gadget_attach.iter().flatten().chain(&self.carrier_attach);
        if let Some(&v) = all_attach.clone().find(|&&v| v >= f) {
            return Err(Error::Scheme(format!("attachment {v} outside frame of {f} vertices")));
        }
        if !self.frame.is_connected() || !self.gadget.is_connected() {
            return Err(Error::Scheme("frame and gadget must be connected".into()));
        }
        if !hom::is_rigid(self.frame.as_digraph()).is_rigid() {
            return Err(Error::Scheme("frame is not rigid".into()));
        }
        let arc = Digraph::new(2, [(0, 1)]).expect("valid arc");
        let image = self.apply(&arc).graph;
        if !image.is_connected() || !hom::is_rigid(image.as_digraph()).is_rigid() {
            return Err(Error::Scheme("single-arc image must be connected and rigid".into()));
        }
        Ok(())
    }

    /// The shipped scheme.
    ///
    /// The frame is an 11-vertex rigid graph in which every vertex lies in a
    /// 4-clique and which is not 4-colourable. Carriers attach to the frame
    /// edge 0-6, gadget tails to 2-4 and heads to 3-8; these three edges are
    /// pairwise disjoint and lie in no triangle. The gadget is the path
    /// tail-t-h-head.
    ///
    /// No vertex outside the frame lies in a 4-clique, so every
    /// homomorphism between images maps frame onto frame, which rigidity
    /// makes the identity. Each attached vertex then has to land on a common
    /// neighbour of its attachment edge, i.e. on a vertex of the same role.
    pub fn default_scheme() -> Self {
        let frame = UGraph::new(
            11,
            [
                (0, 1),
                (0, 4),
                (0, 6),
                (0, 8),
                (0, 9),
                (1, 4),
                (1, 5),
                (1, 8),
                (1, 9),
                (1, 10),
                (2, 3),
                (2, 4),
                (2, 5),
                (2, 6),
                (2, 7),
                (3, 6),
                (3, 7),
                (3, 8),
                (3, 10),
                (4, 9),
                (5, 8),
                (5, 9),
                (5, 10),
                (6, 7),
                (6, 10),
                (7, 9),
                (7, 10),
                (8, 9),
                (9, 10),
            ],
        )
        .expect("valid frame");
        let gadget = UGraph::new(4, [(0, 1), (1, 2), (2, 3)]).expect("valid gadget");
        GadgetScheme::new(frame, vec![0, 6], gadget, 0, 3, vec![vec![], vec![2, 4], vec![3, 8], vec![]])
            .expect("default scheme validates")
    }

    /// Scheme file: a header line `tail head`, the gadget as an edge-list
    /// block, a line listing the carrier attachment, the frame as an
    /// edge-list block, then one attachment line per gadget vertex. An
    /// attachment line is `attach` followed by frame vertex indices.
    /// Edge-list blocks are symmetrized on load.
    pub fn decode(text: &str) -> Result<Self> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        let mut cursor = 0;
        let mut next = |what: &str| -> Result<(usize, &str)> {
            let item = lines
                .get(cursor)
                .copied()
                .ok_or(Error::Parse { line: text.lines().count().max(1), message: format!("missing {what}") })?;
            cursor += 1;
            Ok(item)
        };
        let (line, header) = next("anchor header")?;
        let anchors = parse_numbers(header, line)?;
        if anchors.len() != 2 {
            return Err(Error::Parse { line, message: "expected `tail head`".into() });
        }
        let gadget = read_block(&mut next, "gadget")?;
        let carrier_attach = read_attach(&mut next)?;
        let frame = read_block(&mut next, "frame")?;
        let mut gadget_attach = Vec::with_capacity(gadget.n());
        for _ in 0..gadget.n() {
            gadget_attach.push(read_attach(&mut next)?);
        }
        GadgetScheme::new(frame, carrier_attach, gadget, anchors[0], anchors[1], gadget_attach)
    }

    pub fn encode(&self) -> String {
        let attach = |v: &[usize]| {
            let mut s = String::from("attach");
            for x in v {
                s.push_str(&format!(" {x}"));
            }
            s.push('\n');
            s
        };
        let block = |g: &UGraph| {
            let pairs = g.pairs();
            let mut s = format!("{} {}\n", g.n(), pairs.len());
            for (u, v) in pairs {
                s.push_str(&format!("{u} {v}\n"));
            }
            s
        };
        let mut s = format!("{} {}\n", self.tail, self.head);
        s.push_str(&block(&self.gadget));
        s.push_str(&attach(&self.carrier_attach));
        s.push_str(&block(&self.frame));
        for a in &self.gadget_attach {
            s.push_str(&attach(a));
        }
        s
    }

    fn interior(&self) -> Vec<usize> {
        (0..self.gadget.n()).filter(|&v| v != self.tail && v != self.head).collect()
    }

    fn apply(&self, d: &Digraph) -> Symmetrized {
        if d.n() == 0 {
            return Symmetrized { graph: UGraph::empty(0), carriers: Vec::new() };
        }
        let f = self.frame.n();
        let interior = self.interior();
        let total = f + d.n() + interior.len() * d.edge_count();
        let mut pairs: Vec<(usize, usize)> = self.frame.pairs();
        let carriers: Vec<usize> = (f..f + d.n()).collect();
        for &c in &carriers {
            pairs.extend(self.carrier_attach.iter().map(|&a| (c, a)));
        }
        let mut slot = vec![0usize; self.gadget.n()];
        for (e, &(u, v)) in d.edges().iter().enumerate() {
            let base = f + d.n() + e * interior.len();
            for (i, &g) in interior.iter().enumerate() {
                slot[g] = base + i;
                pairs.extend(self.gadget_attach[g].iter().map(|&a| (base + i, a)));
            }
            slot[self.tail] = carriers[u];
            slot[self.head] = carriers[v];
            pairs.extend(self.gadget.pairs().into_iter().map(|(a, b)| (slot[a], slot[b])));
        }
        Symmetrized { graph: UGraph::new(total, pairs).expect("gadget placement is loop-free"), carriers }
    }
}

fn parse_numbers(line: &str, line_no: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| {
            t.parse().map_err(|_| Error::Parse { line: line_no, message: format!("not a non-negative integer: {t:?}") })
        })
        .collect()
}

fn read_block<'a>(next: &mut impl FnMut(&str) -> Result<(usize, &'a str)>, what: &str) -> Result<UGraph> {
    let (line, header) = next(what)?;
    let nm = parse_numbers(header, line)?;
    if nm.len() != 2 {
        return Err(Error::Parse { line, message: format!("expected `n m` for {what}") });
    }
    let mut pairs = Vec::with_capacity(nm[1]);
    for _ in 0..nm[1] {
        let (line, text) = next(what)?;
        let uv = parse_numbers(text, line)?;
        if uv.len() != 2 {
            return Err(Error::Parse { line, message: "expected `u v`".into() });
        }
        pairs.push((uv[0], uv[1]));
    }
    UGraph::new(nm[0], pairs).map_err(|e| Error::Parse { line, message: e.to_string() })
}

fn read_attach<'a>(next: &mut impl FnMut(&str) -> Result<(usize, &'a str)>) -> Result<Vec<usize>> {
    let (line, text) = next("attach line")?;
    let rest = text.strip_prefix("attach").ok_or(Error::Parse { line, message: "expected `attach ...`".into() })?;
    parse_numbers(rest, line)
}

/// An undirected image plus where each original vertex landed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Symmetrized {
    pub graph: UGraph,
    pub carriers: Vec<usize>,
}

pub fn symmetrize(d: &Digraph, scheme: &GadgetScheme) -> Symmetrized {
    scheme.apply(d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaithfulCheck {
    pub digraph_homs: usize,
    pub symmetrized_homs: usize,
    pub equal: bool,
}

/// Compares `|Hom(d1 -> d2)|` with `|Hom(sym d1 -> sym d2)|`, both counted
/// exhaustively.
pub fn verify_faithful(d1: &Digraph, d2: &Digraph, scheme: &GadgetScheme) -> Result<FaithfulCheck> {
    for d in [d1, d2] {
        if d.n() > FAITHFUL_MAX_VERTICES {
            return Err(Error::Refused(format!(
                "faithfulness is checked exhaustively only up to {FAITHFUL_MAX_VERTICES} vertices, got {}",
                d.n()
            )));
        }
    }
    let digraph_homs = hom::count_homs(&HomQuery::new(d1, d2))?;
    let (s1, s2) = (symmetrize(d1, scheme), symmetrize(d2, scheme));
    let symmetrized_homs =
        hom::count_homs(&HomQuery::new(s1.graph.as_digraph(), s2.graph.as_digraph()).limit(COUNT_CAP))?;
    Ok(FaithfulCheck { digraph_homs, symmetrized_homs, equal: digraph_homs == symmetrized_homs })
}

/// All `2^(n(n-1))` loopless digraphs on `n` labeled vertices, in mask order
/// over the ordered pairs `(u, v)`, `u != v`, taken lexicographically.
pub fn all_digraphs(n: usize) -> Vec<Digraph> {
    let slots: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
    (0u64..1 << slots.len())
        .map(|mask| {
            let edges = slots.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e);
            Digraph::new(n, edges).expect("slots are loop-free")
        })
        .collect()
}

pub fn random_digraph(n: usize, rng: &mut impl Rng) -> Digraph {
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| u != v)
        .filter(|_| rng.gen_bool(0.5))
        .collect();
    Digraph::new(n, edges).expect("loop-free by construction")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaithfulPair {
    pub left: Digraph,
    pub right: Digraph,
    #[serde(flatten)]
    pub check: FaithfulCheck,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub exhaustive_pairs: usize,
    pub random_pairs: usize,
    pub seed: u64,
    pub equal_pairs: usize,
    pub mismatches: Vec<FaithfulPair>,
    pub passed: bool,
}

/// Every ordered pair of 3-vertex digraphs (when `exhaustive3`), plus
/// `random4` seeded pairs of uniformly random 4-vertex digraphs.
pub fn faithfulness_sweep(scheme: &GadgetScheme, exhaustive3: bool, random4: usize, seed: u64) -> Result<SweepReport> {
    let mut pairs: Vec<(Digraph, Digraph)> = Vec::new();
    if exhaustive3 {
        let all = all_digraphs(3);
        for a in &all {
            for b in &all {
                pairs.push((a.clone(), b.clone()));
            }
        }
    }
    let exhaustive_pairs = pairs.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random4 {
        let a = random_digraph(4, &mut rng);
        let b = random_digraph(4, &mut rng);
        pairs.push((a, b));
    }
    let checks: Vec<FaithfulCheck> =
        pairs.par_iter().map(|(a, b)| verify_faithful(a, b, scheme)).collect::<Result<_>>()?;
    let equal_pairs = checks.iter().filter(|c| c.equal).count();
    let mismatches: Vec<FaithfulPair> = pairs
        .into_iter()
        .zip(checks)
        .filter(|(_, c)| !c.equal)
        .map(|((left, right), check)| FaithfulPair { left, right, check })
        .collect();
    Ok(SweepReport {
        exhaustive_pairs,
        random_pairs: random4,
        seed,
        equal_pairs,
        passed: mismatches.is_empty(),
        mismatches,
    })
}
