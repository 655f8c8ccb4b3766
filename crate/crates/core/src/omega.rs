//! Finite prefixes of the successor relation on the naturals with the one
//! extra arc `(0, 2)`, and the witness sets `A(i) = {0, ..., i + 2}`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Digraph, VertexMap};
use crate::hom::{self, HomQuery};

/// Default distance between the witness size and the prefix length.
pub const DEFAULT_SLACK: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaPrefix {
    pub bound: usize,
    pub graph: Digraph,
}

/// Edges `(i, i+1)` for `i + 1 < m`, plus `(0, 2)` once `m >= 3`.
pub fn omega_prefix(m: usize) -> OmegaPrefix {
    let chain = (1..m).map(|j| (j - 1, j));
    let extra = (m >= 3).then_some((0, 2));
    let graph = Digraph::new(m, chain.chain(extra)).expect("prefix edges are in range and loop-free");
    OmegaPrefix { bound: m, graph }
}

pub fn omega_witness(i: usize) -> Vec<usize> {
    (0..=i + 2).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaCertificate {
    pub i: usize,
    pub m: usize,
    pub witness: Vec<usize>,
    pub hom_count: usize,
    pub adequate: bool,
    pub counterexample: Option<VertexMap>,
}

/// Enumerates every hom from the substructure on `A(i)` into the prefix of
/// length `m`; adequate iff the inclusion is the only one.
pub fn verify_omega(i: usize, m: usize) -> Result<OmegaCertificate> {
    if m < i + 3 {
        return Err(Error::Bound(format!("prefix of length {m} cannot contain A({i}) = {{0..{}}}", i + 2)));
    }
    let witness = omega_witness(i);
    let prefix = omega_prefix(m);
    let (sub, _) = prefix.graph.induced(&witness)?;
    let maps = hom::enumerate_homs(&HomQuery::new(&sub, &prefix.graph))?;
    let counterexample = maps
        .iter()
        .find(|f| !f.is_identity())
        .map(|f| VertexMap::new(witness.clone(), f.image.clone()).expect("lengths agree"));
    Ok(OmegaCertificate { i, m, witness, hom_count: maps.len(), adequate: counterexample.is_none(), counterexample })
}

/// Whether `j -> j + c` on `A(i)` is a hom into the prefix of length `m`.
pub fn shift_is_hom(i: usize, m: usize, c: usize) -> bool {
    let prefix = omega_prefix(m);
    let witness = omega_witness(i);
    if witness.last().is_some_and(|&top| top + c >= m) {
        return false;
    }
    let (sub, _) = prefix.graph.induced(&witness).expect("witness fits the prefix");
    let image: Vec<usize> = witness.iter().map(|&j| j + c).collect();
    hom::is_homomorphism(&sub, &prefix.graph, &image)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaEntry {
    pub i: usize,
    /// Certificate at `m = i + 3 + slack`.
    pub certificate: OmegaCertificate,
    /// Verdicts for `m = i + 3, ..., i + 3 + slack`.
    pub verdicts: Vec<bool>,
    pub stable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaReport {
    pub i_max: usize,
    pub slack: usize,
    pub entries: Vec<OmegaEntry>,
    pub passed: bool,
}

/// Verifies every `i <= i_max` at every prefix length from `i + 3` to
/// `i + 3 + slack`.
pub fn omega_sweep(i_max: usize, slack: usize) -> Result<OmegaReport> {
    let entries: Vec<OmegaEntry> = (0..=i_max)
        .into_par_iter()
        .map(|i| {
            let certs: Vec<OmegaCertificate> =
                (0..=slack).map(|s| verify_omega(i, i + 3 + s)).collect::<Result<_>>()?;
            let verdicts: Vec<bool> = certs.iter().map(|c| c.adequate).collect();
            let stable = verdicts.iter().all(|&v| v == verdicts[0]);
            let certificate = certs.into_iter().last().expect("at least one prefix length");
            Ok(OmegaEntry { i, certificate, verdicts, stable })
        })
        .collect::<Result<_>>()?;
    let passed = entries.iter().all(|e| e.stable && e.certificate.adequate);
    Ok(OmegaReport { i_max, slack, entries, passed })
}
