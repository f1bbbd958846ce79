//! Abstract Reeb functions: finite multigraphs with distinct real heights,
//! where every vertex matches one of the local models that arise on a closed
//! surface (extremum, monotone pass-through, or fork).

use crate::height::Height;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u64);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Extremum {
    /// Degree-1 vertex whose edge leaves upward: a local minimum.
    Min,
    /// Degree-1 vertex whose edge arrives from below: a local maximum.
    Max,
}

/// The local model of a vertex, determined by its degree and by how many of
/// its edges go up versus down.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum VertexModel {
    Extremum(Extremum),
    /// Degree 2, one edge down and one up. Occurs only over nonorientable
    /// surfaces, where a contour can traverse a saddle without splitting.
    PassThrough,
    /// Degree 3. Sign +1: one edge down, two up (a contour splits going up).
    /// Sign -1: two edges down, one up (two contours merge going up).
    Fork(i8),
}

impl VertexModel {
    pub fn degree(self) -> usize {
        match self {
            VertexModel::Extremum(_) => 1,
            VertexModel::PassThrough => 2,
            VertexModel::Fork(_) => 3,
        }
    }

    /// Short lowercase name, also used in reports: "min", "max", "pass",
    /// "split" (upward fork), "merge" (downward fork).
    pub fn name(self) -> &'static str {
        match self {
            VertexModel::Extremum(Extremum::Min) => "min",
            VertexModel::Extremum(Extremum::Max) => "max",
            VertexModel::PassThrough => "pass",
            VertexModel::Fork(s) if s > 0 => "split",
            VertexModel::Fork(_) => "merge",
        }
    }
}

/// The complete cobordism invariant: `t` is the sum of fork signs, `d` the
/// parity of the pass-through count.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, serde::Serialize, serde::Deserialize)]
pub struct Sigma {
    pub t: i64,
    pub d: u8,
}

impl fmt::Display for Sigma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.t, self.d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DuplicateHeight { a: VertexId, b: VertexId, height: Height },
    SelfLoop { vertex: VertexId },
    EdgeEndpointMissing { edge_index: usize, vertex: VertexId },
    DegreeOutOfRange { vertex: VertexId, degree: usize },
    /// Degree 2 but both edges on the same side: not a monotone crossing.
    NonMonotonePass { vertex: VertexId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateHeight { a, b, height } => {
                write!(f, "vertices {a} and {b} share height {height}")
            }
            Violation::SelfLoop { vertex } => write!(f, "self-loop at {vertex}"),
            Violation::EdgeEndpointMissing { edge_index, vertex } => {
                write!(f, "edge #{edge_index} references missing vertex {vertex}")
            }
            Violation::DegreeOutOfRange { vertex, degree } => {
                write!(f, "{vertex} has degree {degree}, expected 1, 2, or 3")
            }
            Violation::NonMonotonePass { vertex } => {
                write!(f, "{vertex} has degree 2 with both edges on the same side")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            write!(f, "valid")
        } else {
            for (i, v) in self.violations.iter().enumerate() {
                if i > 0 {
                    writeln!(f)?;
                }
                write!(f, "{v}")?;
            }
            Ok(())
        }
    }
}

/// A finite multigraph with a height per vertex. The empty graph is valid (it
/// is the unit of disjoint union). Self-loops are never allowed; parallel
/// edges are.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReebFunction {
    heights: BTreeMap<VertexId, Height>,
    /// Each edge stored with endpoints ordered by height (lower first);
    /// the list kept sorted for canonical equality.
    edges: Vec<(VertexId, VertexId)>,
}

impl Default for ReebFunction {
    fn default() -> Self {
        Self::new()
    }
}

impl ReebFunction {
    pub fn new() -> Self {
        ReebFunction { heights: BTreeMap::new(), edges: Vec::new() }
    }

    /// Builds a graph from raw parts. Duplicate heights and malformed edges
    /// are accepted here and surface through `validate`; edges with missing
    /// endpoints or self-loops are rejected immediately because the canonical
    /// edge order needs both heights.
    pub fn from_parts(
        heights: impl IntoIterator<Item = (VertexId, Height)>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, Violation> {
        let mut g = ReebFunction::new();
        for (id, h) in heights {
            g.heights.insert(id, h);
        }
        for (edge_index, (a, b)) in edges.into_iter().enumerate() {
            for v in [a, b] {
                if !g.heights.contains_key(&v) {
                    return Err(Violation::EdgeEndpointMissing { edge_index, vertex: v });
                }
            }
            if a == b {
                return Err(Violation::SelfLoop { vertex: a });
            }
            g.push_edge(a, b);
        }
        g.sort_edges();
        Ok(g)
    }

    fn push_edge(&mut self, a: VertexId, b: VertexId) {
        let (lo, hi) = if (&self.heights[&a], a) < (&self.heights[&b], b) { (a, b) } else { (b, a) };
        self.edges.push((lo, hi));
    }

    fn sort_edges(&mut self) {
        self.edges.sort();
    }

    /// Adds a vertex under the smallest id above every existing one, so the
    /// id assignment is a function of the current content alone and replays
    /// of a move sequence allocate identically.
    pub fn add_vertex(&mut self, h: Height) -> VertexId {
        let id = VertexId(self.heights.keys().next_back().map_or(0, |v| v.0 + 1));
        self.heights.insert(id, h);
        id
    }

    /// Adds an edge between existing, distinct vertices.
    pub fn add_edge(&mut self, a: VertexId, b: VertexId) {
        assert!(self.heights.contains_key(&a) && self.heights.contains_key(&b), "unknown endpoint");
        assert_ne!(a, b, "self-loop");
        self.push_edge(a, b);
        self.sort_edges();
    }

    /// Removes one copy of the edge; panics if absent.
    pub fn remove_edge(&mut self, a: VertexId, b: VertexId) {
        let key = if (&self.heights[&a], a) < (&self.heights[&b], b) { (a, b) } else { (b, a) };
        let i = self.edges.iter().position(|&e| e == key).expect("edge not present");
        self.edges.remove(i);
    }

    /// Removes a vertex and all incident edges.
    pub fn remove_vertex(&mut self, v: VertexId) {
        assert!(self.heights.remove(&v).is_some(), "unknown vertex");
        self.edges.retain(|&(a, b)| a != v && b != v);
    }

    pub fn set_height(&mut self, v: VertexId, h: Height) {
        assert!(self.heights.contains_key(&v), "unknown vertex");
        self.heights.insert(v, h);
        // Re-derive the canonical endpoint order under the new height.
        let edges: Vec<_> = self.edges.drain(..).collect();
        for (a, b) in edges {
            self.push_edge(a, b);
        }
        self.sort_edges();
    }

    pub fn height(&self, v: VertexId) -> &Height {
        &self.heights[&v]
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.heights.contains_key(&v)
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.heights.keys().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.heights.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges with endpoints ordered lower-height first, sorted.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Neighbors through edges leaving `v` upward (with multiplicity).
    pub fn up_neighbors(&self, v: VertexId) -> Vec<VertexId> {
        self.edges.iter().filter(|&&(a, _)| a == v).map(|&(_, b)| b).collect()
    }

    /// Neighbors through edges leaving `v` downward (with multiplicity).
    pub fn down_neighbors(&self, v: VertexId) -> Vec<VertexId> {
        self.edges.iter().filter(|&&(_, b)| b == v).map(|&(a, _)| a).collect()
    }

    /// The local model of a vertex, or `None` if its degree is out of range.
    /// Assumes heights are distinct (endpoint order is height order).
    pub fn classify(&self, v: VertexId) -> Option<VertexModel> {
        let up = self.up_neighbors(v).len();
        let down = self.down_neighbors(v).len();
        match (down, up) {
            (0, 1) => Some(VertexModel::Extremum(Extremum::Min)),
            (1, 0) => Some(VertexModel::Extremum(Extremum::Max)),
            (1, 1) => Some(VertexModel::PassThrough),
            (1, 2) => Some(VertexModel::Fork(1)),
            (2, 1) => Some(VertexModel::Fork(-1)),
            _ => None,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut by_height: BTreeMap<&Height, VertexId> = BTreeMap::new();
        for (&v, h) in &self.heights {
            if let Some(&other) = by_height.get(h) {
                violations.push(Violation::DuplicateHeight { a: other, b: v, height: h.clone() });
            } else {
                by_height.insert(h, v);
            }
        }
        for (edge_index, &(a, b)) in self.edges.iter().enumerate() {
            for v in [a, b] {
                if !self.heights.contains_key(&v) {
                    violations.push(Violation::EdgeEndpointMissing { edge_index, vertex: v });
                }
            }
            if a == b {
                violations.push(Violation::SelfLoop { vertex: a });
            }
        }
        if violations.is_empty() {
            for &v in self.heights.keys() {
                let up = self.up_neighbors(v).len();
                let down = self.down_neighbors(v).len();
                let degree = up + down;
                if !(1..=3).contains(&degree) {
                    violations.push(Violation::DegreeOutOfRange { vertex: v, degree });
                } else if degree == 2 && (up == 0 || down == 0) {
                    violations.push(Violation::NonMonotonePass { vertex: v });
                }
            }
        }
        ValidationReport { violations }
    }

    /// The invariant `(t, d)`; requires a valid graph.
    pub fn sigma(&self) -> Result<Sigma, ValidationReport> {
        let report = self.validate();
        if !report.is_valid() {
            return Err(report);
        }
        let mut t = 0i64;
        let mut passes = 0u64;
        for v in self.vertex_ids() {
            match self.classify(v).expect("validated") {
                VertexModel::Fork(s) => t += s as i64,
                VertexModel::PassThrough => passes += 1,
                VertexModel::Extremum(_) => {}
            }
        }
        Ok(Sigma { t, d: (passes % 2) as u8 })
    }

    pub fn count_model(&self, want: VertexModel) -> usize {
        self.vertex_ids().filter(|&v| self.classify(v) == Some(want)).count()
    }

    /// V - E; each component of a valid graph is connected, so this equals
    /// the number of components minus the number of independent cycles.
    pub fn euler_characteristic(&self) -> i64 {
        self.heights.len() as i64 - self.edges.len() as i64
    }

    /// Connected components as sorted vertex sets.
    pub fn components(&self) -> Vec<BTreeSet<VertexId>> {
        let mut parent: BTreeMap<VertexId, VertexId> = self.vertex_ids().map(|v| (v, v)).collect();
        fn find(parent: &mut BTreeMap<VertexId, VertexId>, v: VertexId) -> VertexId {
            let p = parent[&v];
            if p == v {
                v
            } else {
                let root = find(parent, p);
                parent.insert(v, root);
                root
            }
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent.insert(ra, rb);
            }
        }
        let mut groups: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
        for v in self.vertex_ids() {
            let root = find(&mut parent, v);
            groups.entry(root).or_default().insert(v);
        }
        groups.into_values().collect()
    }

    /// The component containing `v`.
    pub fn component_of(&self, v: VertexId) -> BTreeSet<VertexId> {
        let mut seen = BTreeSet::from([v]);
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            for &(a, b) in &self.edges {
                let other = if a == x { b } else if b == x { a } else { continue };
                if seen.insert(other) {
                    stack.push(other);
                }
            }
        }
        seen
    }

    /// Disjoint union. Vertices of `other` are renumbered above `self`'s ids.
    /// Any height collision is resolved by shifting `other` up by an exact
    /// offset chosen so all heights stay distinct (deterministic).
    pub fn disjoint_union(&self, other: &ReebFunction) -> ReebFunction {
        let mut out = self.clone();
        let mut map: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        let existing: BTreeSet<&Height> = out.heights.values().collect();
        let collides = other.heights.values().any(|h| existing.contains(h));
        let offset = if collides {
            let max_self = out.heights.values().max().cloned().unwrap_or_else(Height::zero);
            let min_other = other.heights.values().min().cloned().unwrap_or_else(Height::zero);
            Some(max_self.sub(&min_other).shifted_by_int(1))
        } else {
            None
        };
        for (&v, h) in &other.heights {
            let h = match &offset {
                Some(off) => h.add(off),
                None => h.clone(),
            };
            let nv = out.add_vertex(h);
            map.insert(v, nv);
        }
        for &(a, b) in &other.edges {
            out.add_edge(map[&a], map[&b]);
        }
        out
    }

    /// Replaces all heights at once via `f`; panics if `f` misses a vertex.
    /// Used for order-preserving reparametrization.
    pub fn with_heights(&self, f: &BTreeMap<VertexId, Height>) -> ReebFunction {
        let mut g = ReebFunction::new();
        for &v in self.heights.keys() {
            g.heights.insert(v, f[&v].clone());
        }
        for &(a, b) in &self.edges {
            g.push_edge(a, b);
        }
        g.sort_edges();
        g
    }

    /// Vertices sorted by height, ascending.
    pub fn vertices_by_height(&self) -> Vec<VertexId> {
        let mut vs: Vec<VertexId> = self.vertex_ids().collect();
        vs.sort_by(|a, b| (self.height(*a), *a).cmp(&(self.height(*b), *b)));
        vs
    }

    /// Mirror image: negates all heights. Swaps min/max and the fork signs.
    pub fn flipped(&self) -> ReebFunction {
        let f: BTreeMap<VertexId, Height> = self.heights.iter().map(|(&v, h)| (v, h.negated())).collect();
        self.with_heights(&f)
    }

}
