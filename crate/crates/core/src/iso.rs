//! Isomorphism of abstract Reeb functions.
//!
//! Two graphs are considered the same when a graph isomorphism matches them
//! component by component preserving, within each component, the relative
//! order of heights (exact height values never matter, only their order, and
//! components may be reordered freely on the height line).
//!
//! Each component is reduced to a canonical key: its vertices sorted by
//! height become ranks 0..n, and the key is the sorted multiset of rank
//! pairs. A graph's key is the sorted multiset of component keys, so two
//! graphs are isomorphic iff their keys are equal.

use crate::graph::{ReebFunction, Sigma, VertexId};
use std::collections::BTreeMap;

/// One component: vertex count and edges as (lower rank, upper rank) pairs,
/// sorted. Vertex models are recoverable from the edge pattern, so they do
/// not need to be stored separately.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ComponentKey {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
}

impl ComponentKey {
    /// The invariant of the component, read off the rank-pair edges.
    pub fn sigma(&self) -> Sigma {
        let mut sigma = Sigma { t: 0, d: 0 };
        for r in 0..self.vertex_count {
            let down = self.edges.iter().filter(|&&(_, b)| b == r).count();
            let up = self.edges.iter().filter(|&&(a, _)| a == r).count();
            match (down, up) {
                (1, 2) => sigma.t += 1,
                (2, 1) => sigma.t -= 1,
                (1, 1) => sigma.d ^= 1,
                _ => {}
            }
        }
        sigma
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct CanonicalKey {
    pub components: Vec<ComponentKey>,
}

impl CanonicalKey {
    /// The invariant of the whole class: components compose by addition in
    /// the integer part and parity in the two-torsion part.
    pub fn sigma(&self) -> Sigma {
        let mut sigma = Sigma { t: 0, d: 0 };
        for c in &self.components {
            let s = c.sigma();
            sigma.t += s.t;
            sigma.d ^= s.d;
        }
        sigma
    }
}

pub fn canonical_key(g: &ReebFunction) -> CanonicalKey {
    let mut components = Vec::new();
    for comp in g.components() {
        let mut vs: Vec<VertexId> = comp.iter().copied().collect();
        vs.sort_by(|a, b| g.height(*a).cmp(g.height(*b)));
        let rank: BTreeMap<VertexId, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut edges: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .filter(|(a, _)| comp.contains(a))
            .map(|&(a, b)| (rank[&a], rank[&b]))
            .collect();
        edges.sort();
        components.push(ComponentKey { vertex_count: vs.len(), edges });
    }
    components.sort();
    CanonicalKey { components }
}

pub fn is_isomorphic(a: &ReebFunction, b: &ReebFunction) -> bool {
    canonical_key(a) == canonical_key(b)
}
