//! Disjoint unions of equal-size components with `(component, vertex)`
//! addressing.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Digraph;

/// Components `c` occupy the global block `[c*n, (c+1)*n)`; edges never
/// cross blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnionStructure {
    component_size: usize,
    components: Vec<Digraph>,
    #[serde(skip)]
    flat: Digraph,
}

pub fn build_union(components: Vec<Digraph>) -> Result<UnionStructure> {
    let Some(first) = components.first() else {
        return Err(Error::Arity("a union needs at least one component".into()));
    };
    let n = first.n();
    if n == 0 {
        return Err(Error::Arity("components must have at least one vertex".into()));
    }
    if let Some((c, bad)) = components.iter().enumerate().find(|(_, g)| g.n() != n) {
        return Err(Error::Arity(format!("component {c} has {} vertices, expected {n}", bad.n())));
    }
    let edges: Vec<_> = components
        .iter()
        .enumerate()
        .flat_map(|(c, g)| g.edges().iter().map(move |&(u, v)| (c * n + u, c * n + v)))
        .collect();
    let flat = Digraph::new(components.len() * n, edges)?;
    Ok(UnionStructure { component_size: n, components, flat })
}

impl UnionStructure {
    pub fn component_size(&self) -> usize {
        self.component_size
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Digraph] {
        &self.components
    }

    pub fn flat(&self) -> &Digraph {
        &self.flat
    }

    pub fn n(&self) -> usize {
        self.flat.n()
    }

    pub fn global(&self, component: usize, vertex: usize) -> usize {
        component * self.component_size + vertex
    }

    pub fn address(&self, global: usize) -> (usize, usize) {
        (global / self.component_size, global % self.component_size)
    }

    pub fn block(&self, component: usize) -> Vec<usize> {
        let start = component * self.component_size;
        (start..start + self.component_size).collect()
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        (0..self.component_count()).map(|c| self.block(c)).collect()
    }

    /// Edge test by the union formula, without the flat graph.
    pub fn related(&self, u: usize, v: usize) -> bool {
        let ((c1, a), (c2, b)) = (self.address(u), self.address(v));
        c1 == c2 && self.components[c1].has_edge(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t3() -> Digraph {
        Digraph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn single_component_is_itself() {
        let u = build_union(vec![t3()]).unwrap();
        assert_eq!(u.flat(), &t3());
    }

    #[test]
    fn blocks_are_disjoint() {
        let u = build_union(vec![t3(), t3().converse()]).unwrap();
        assert!(u.flat().edges().iter().all(|&(a, b)| (a < 3) == (b < 3)));
        assert_eq!(u.flat().edge_count(), 6);
    }

    #[test]
    fn addressing() {
        let comps = vec![Digraph::empty(5); 3];
        let u = build_union(comps).unwrap();
        assert_eq!(u.address(2 * 5 + 3), (2, 3));
        assert_eq!(u.global(2, 3), 13);
    }

    #[test]
    fn arity_errors() {
        assert!(matches!(build_union(vec![]), Err(Error::Arity(_))));
        assert!(matches!(build_union(vec![t3(), Digraph::empty(2)]), Err(Error::Arity(_))));
    }
}
