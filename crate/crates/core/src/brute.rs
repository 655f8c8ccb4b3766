//! Naive homomorphism enumeration over all `target.n ^ source.n` maps.
//!
//! Shares nothing with the pruned engine beyond [`Digraph`]; used as an
//! independent certificate for small instances.

use crate::graph::Digraph;

/// Every map satisfying edge preservation and the pins, in lexicographic
/// order of assignment vectors.
pub fn all_homs(source: &Digraph, target: &Digraph, pins: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let (sn, tn) = (source.n(), target.n());
    let mut found = Vec::new();
    if sn > 0 && tn == 0 {
        return found;
    }
    let mut map = vec![0usize; sn];
    loop {
        let pins_ok = pins.iter().all(|&(u, v)| map[u] == v);
        if pins_ok && source.edges().iter().all(|&(a, b)| target.has_edge(map[a], map[b])) {
            found.push(map.clone());
        }
        // odometer, last position fastest
        let mut i = sn;
        loop {
            if i == 0 {
                return found;
            }
            i -= 1;
            map[i] += 1;
            if map[i] < tn {
                break;
            }
            map[i] = 0;
        }
    }
}

/// Rigidity by checking every self-map.
pub fn is_rigid(g: &Digraph) -> bool {
    all_homs(g, g, &[]).iter().all(|m| m.iter().enumerate().all(|(v, &t)| v == t))
}
