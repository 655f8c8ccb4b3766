//! Rigid relations at finite scale: homomorphism search, orientation
//! completions of symmetric bases, disjoint unions with witness-set checks,
//! an explicit prefix witness, rigid-graph search and a faithful
//! digraph-to-graph transformation.

pub mod bitset;
pub mod brute;
pub mod disjoint;
pub mod error;
pub mod graph;
pub mod hom;
pub mod omega;
pub mod phi;
pub mod search;
pub mod symmetrize;
pub mod witness;

pub use disjoint::{build_union, UnionStructure};
pub use error::{Error, Result};
pub use graph::{Digraph, UGraph, VertexMap};
pub use hom::{enumerate_homs, is_rigid, HomQuery, RigidityCertificate};
pub use phi::{build_phi_member, compute_t, NonEdgeSet, PhiMember};
pub use symmetrize::{symmetrize, GadgetScheme};
pub use witness::{verify_diamond, verify_star, WitnessBound, WitnessProvider, WitnessReport};
