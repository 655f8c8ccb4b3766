//! Completions of a symmetric base by orienting every non-adjacent pair,
//! and plain orientations of the base itself.
//!
//! A member is addressed by one bit per non-edge pair in canonical order;
//! `false` orients the pair `(min, max)`, `true` orients it `(max, min)`.
//! The family is never materialized.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Digraph, UGraph};
use crate::hom::{self, HomQuery};

/// Unordered pairs `{a, b}`, `a < b`, that are not base edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonEdgeSet {
    pub base: UGraph,
    pub pairs: Vec<(usize, usize)>,
}

impl NonEdgeSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `2^|pairs|`, or `None` when it does not fit in a `u128`.
    pub fn phi_count(&self) -> Option<u128> {
        1u128.checked_shl(self.pairs.len() as u32)
    }
}

pub fn compute_t(base: &UGraph) -> NonEdgeSet {
    let n = base.n();
    let pairs = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| !base.has_edge(a, b)).collect();
    NonEdgeSet { base: base.clone(), pairs }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiMember {
    pub base: UGraph,
    pub bits: Vec<bool>,
    pub realized: Digraph,
}

pub fn build_phi_member(base: &UGraph, bits: &[bool]) -> Result<PhiMember> {
    build_from_t(&compute_t(base), bits)
}

/// Same as [`build_phi_member`] with the non-edge set already computed.
pub fn build_from_t(t: &NonEdgeSet, bits: &[bool]) -> Result<PhiMember> {
    if bits.len() != t.len() {
        return Err(Error::Arity(format!("expected {} orientation bits, got {}", t.len(), bits.len())));
    }
    let oriented = t.pairs.iter().zip(bits).map(|(&(a, b), &flip)| if flip { (b, a) } else { (a, b) });
    let edges: Vec<_> = t.base.as_digraph().edges().iter().copied().chain(oriented).collect();
    let realized = Digraph::new(t.base.n(), edges)?;
    if let Some(v) = phi_violation(&t.base, &realized) {
        unreachable!("constructed member violates {v:?}");
    }
    Ok(PhiMember { base: t.base.clone(), bits: bits.to_vec(), realized })
}

/// The first clause a candidate relation breaks, with the offending pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "clause", rename_all = "kebab-case")]
pub enum PhiViolation {
    /// A base edge is missing.
    BaseContainment { u: usize, v: usize },
    /// Neither direction of a pair is present.
    Completeness { u: usize, v: usize },
    /// Both directions of a non-base pair are present.
    ExtraSymmetry { u: usize, v: usize },
}

impl PhiViolation {
    pub fn clause(&self) -> u8 {
        match self {
            PhiViolation::BaseContainment { .. } => 1,
            PhiViolation::Completeness { .. } => 2,
            PhiViolation::ExtraSymmetry { .. } => 3,
        }
    }
}

fn phi_violation(base: &UGraph, s: &Digraph) -> Option<PhiViolation> {
    let n = base.n();
    for u in 0..n {
        for v in 0..n {
            if u != v && base.has_edge(u, v) && !s.has_edge(u, v) {
                return Some(PhiViolation::BaseContainment { u, v });
            }
        }
    }
    for u in 0..n {
        for v in u + 1..n {
            let (fwd, back) = (s.has_edge(u, v), s.has_edge(v, u));
            if !fwd && !back {
                return Some(PhiViolation::Completeness { u, v });
            }
            if fwd && back && !base.has_edge(u, v) {
                return Some(PhiViolation::ExtraSymmetry { u, v });
            }
        }
    }
    None
}

/// Checks the three membership clauses over all pairs.
pub fn check_phi_member(base: &UGraph, s: &Digraph) -> Result<Option<PhiViolation>> {
    if s.n() != base.n() {
        return Err(Error::Arity(format!("base has {} vertices, relation has {}", base.n(), s.n())));
    }
    Ok(phi_violation(base, s))
}

pub fn is_phi_member(base: &UGraph, s: &Digraph) -> Result<bool> {
    Ok(check_phi_member(base, s)?.is_none())
}

/// Bits of member number `index`, most significant bit first, so that
/// indices run through bit vectors in lexicographic order.
pub fn bits_of_index(len: usize, index: u128) -> Vec<bool> {
    (0..len).map(|i| index >> (len - 1 - i) & 1 == 1).collect()
}

pub fn index_of_bits(bits: &[bool]) -> u128 {
    bits.iter().fold(0, |acc, &b| acc << 1 | b as u128)
}

/// Lazily walks all members in index order.
pub fn enumerate_phi(t: &NonEdgeSet) -> Result<impl Iterator<Item = PhiMember> + '_> {
    let count = t
        .phi_count()
        .filter(|_| t.len() < 64)
        .ok_or_else(|| Error::Refused(format!("{} non-edge pairs are too many to enumerate", t.len())))?;
    Ok((0..count).map(move |i| build_from_t(t, &bits_of_index(t.len(), i)).expect("length matches")))
}

pub fn random_bits(len: usize, rng: &mut impl Rng) -> Vec<bool> {
    (0..len).map(|_| rng.gen_bool(0.5)).collect()
}

/// Two distinct uniformly random bit vectors, or `None` if `len == 0`.
pub fn random_distinct_bits(len: usize, rng: &mut impl Rng) -> Option<(Vec<bool>, Vec<bool>)> {
    if len == 0 {
        return None;
    }
    let a = random_bits(len, rng);
    loop {
        let b = random_bits(len, rng);
        if b != a {
            return Some((a, b));
        }
    }
}

/// `m` distinct members drawn without replacement, in draw order.
pub fn sample_distinct_members(t: &NonEdgeSet, m: usize, rng: &mut impl Rng) -> Result<Vec<PhiMember>> {
    if let Some(count) = t.phi_count() {
        if (m as u128) > count {
            return Err(Error::Bound(format!("asked for {m} distinct members, family has {count}")));
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::with_capacity(m);
    while out.len() < m {
        let bits = random_bits(t.len(), rng);
        if seen.insert(bits.clone()) {
            out.push(build_from_t(t, &bits)?);
        }
    }
    Ok(out)
}

/// The base edges `{a, b}`, `a < b`, each oriented by one bit.
pub fn orientation_from_bits(base: &UGraph, bits: &[bool]) -> Result<Digraph> {
    let pairs = base.pairs();
    if bits.len() != pairs.len() {
        return Err(Error::Arity(format!("expected {} orientation bits, got {}", pairs.len(), bits.len())));
    }
    let edges = pairs.iter().zip(bits).map(|(&(a, b), &flip)| if flip { (b, a) } else { (a, b) });
    Digraph::new(base.n(), edges)
}

/// All `2^|edges|` orientations, in bit-vector order.
pub fn enumerate_orientations(base: &UGraph) -> Result<impl Iterator<Item = Digraph> + '_> {
    let m = base.pairs().len();
    if m >= 64 {
        return Err(Error::Refused(format!("{m} edges are too many to enumerate orientations")));
    }
    Ok((0..1u128 << m).map(move |i| orientation_from_bits(base, &bits_of_index(m, i)).expect("length matches")))
}

pub fn sample_orientation(base: &UGraph, rng: &mut impl Rng) -> Digraph {
    let bits = random_bits(base.pairs().len(), rng);
    orientation_from_bits(base, &bits).expect("length matches")
}

/// Hom counts above this are reported as capped.
pub const SWEEP_HOM_CAP: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiPairRecord {
    pub left: Vec<bool>,
    pub right: Vec<bool>,
    pub homs: usize,
    pub capped: bool,
    /// Every hom found is also an endomorphism of the base.
    pub homs_fix_base: bool,
    /// The identity map is not a hom from left to right.
    pub identity_rejected: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiSweepReport {
    pub base_n: usize,
    pub non_edge_pairs: usize,
    pub base_rigid: bool,
    pub samples: usize,
    pub seed: u64,
    pub pairs_checked: usize,
    pub total_homs: usize,
    pub homs_fix_base: bool,
    pub identity_rejected: bool,
    pub pairs: Vec<PhiPairRecord>,
}

impl PhiSweepReport {
    /// Under a rigid base no pair of distinct members may admit a hom.
    pub fn passed(&self) -> bool {
        self.homs_fix_base && self.identity_rejected && (!self.base_rigid || self.total_homs == 0)
    }
}

pub fn check_phi_pair(t: &NonEdgeSet, left: &[bool], right: &[bool]) -> Result<PhiPairRecord> {
    let (s1, s2) = (build_from_t(t, left)?, build_from_t(t, right)?);
    let maps = hom::enumerate_homs(&HomQuery::new(&s1.realized, &s2.realized).limit(SWEEP_HOM_CAP + 1))?;
    let base = t.base.as_digraph();
    let homs_fix_base = maps.iter().all(|f| hom::is_homomorphism(base, base, &f.image));
    let identity: Vec<usize> = (0..base.n()).collect();
    let identity_rejected = left == right || !hom::is_homomorphism(&s1.realized, &s2.realized, &identity);
    Ok(PhiPairRecord {
        left: left.to_vec(),
        right: right.to_vec(),
        homs: maps.len().min(SWEEP_HOM_CAP),
        capped: maps.len() > SWEEP_HOM_CAP,
        homs_fix_base,
        identity_rejected,
    })
}

/// Counts homs between `samples` seeded pairs of distinct members.
pub fn phi_sweep(base: &UGraph, samples: usize, seed: u64) -> Result<PhiSweepReport> {
    let t = compute_t(base);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let drawn: Vec<(Vec<bool>, Vec<bool>)> =
        (0..samples).map_while(|_| random_distinct_bits(t.len(), &mut rng)).collect();
    let pairs: Vec<PhiPairRecord> = drawn.par_iter().map(|(a, b)| check_phi_pair(&t, a, b)).collect::<Result<_>>()?;
    Ok(PhiSweepReport {
        base_n: base.n(),
        non_edge_pairs: t.len(),
        base_rigid: hom::is_rigid(base.as_digraph()).is_rigid(),
        samples,
        seed,
        pairs_checked: pairs.len(),
        total_homs: pairs.iter().map(|p| p.homs).sum(),
        homs_fix_base: pairs.iter().all(|p| p.homs_fix_base),
        identity_rejected: pairs.iter().all(|p| p.identity_rejected),
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> UGraph {
        UGraph::new(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn non_edge_counts() {
        let tri = UGraph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(compute_t(&tri).is_empty());
        assert_eq!(compute_t(&tri).phi_count(), Some(1));
        assert_eq!(compute_t(&path3()).pairs, vec![(0, 2)]);
        let t = compute_t(&UGraph::empty(3));
        assert_eq!(t.pairs, vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(t.phi_count(), Some(8));
    }

    #[test]
    fn path_member() {
        let m = build_phi_member(&path3(), &[false]).unwrap();
        assert_eq!(m.realized.edges(), &[(0, 1), (0, 2), (1, 0), (1, 2), (2, 1)]);
        assert!(build_phi_member(&path3(), &[]).is_err());
    }

    #[test]
    fn violations() {
        let base = path3();
        let missing = Digraph::new(3, [(0, 1), (1, 0), (1, 2), (0, 2)]).unwrap();
        assert_eq!(check_phi_member(&base, &missing).unwrap().unwrap().clause(), 1);
        let both = Digraph::new(3, [(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)]).unwrap();
        assert_eq!(check_phi_member(&base, &both).unwrap(), Some(PhiViolation::ExtraSymmetry { u: 0, v: 2 }));
        let neither = base.as_digraph().clone();
        assert_eq!(check_phi_member(&base, &neither).unwrap().unwrap().clause(), 2);
        assert!(check_phi_member(&base, &Digraph::empty(2)).is_err());
    }

    #[test]
    fn index_roundtrip() {
        for i in 0..16u128 {
            assert_eq!(index_of_bits(&bits_of_index(4, i)), i);
        }
        assert_eq!(bits_of_index(3, 1), vec![false, false, true]);
    }

    #[test]
    fn orientation_counts() {
        let edge = UGraph::new(2, [(0, 1)]).unwrap();
        assert_eq!(enumerate_orientations(&edge).unwrap().count(), 2);
        let tri = UGraph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(enumerate_orientations(&tri).unwrap().count(), 8);
    }

    #[test]
    fn sweep_on_non_rigid_base_keeps_invariants() {
        let r = phi_sweep(&UGraph::empty(3), 10, 1).unwrap();
        assert_eq!(r.pairs_checked, 10);
        assert!(!r.base_rigid);
        assert!(r.identity_rejected && r.homs_fix_base);
    }
}
