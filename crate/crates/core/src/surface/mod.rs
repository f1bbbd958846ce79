//! Triangulated closed surfaces: validation, topology, and the extraction of
//! Reeb graphs from piecewise-linear height functions on them.
//!
//! A surface is stored purely combinatorially as triangles over vertex
//! indices.  Construction checks that the complex is a closed 2-manifold:
//! every edge borders exactly two triangles and every vertex link is a single
//! cycle.  Orientability is detected by propagating triangle orientations,
//! so nonorientable surfaces are first-class inputs.

pub mod extract;
pub mod morse;
pub mod off;

pub use extract::{extract_reeb, ExtractError, ReebExtraction};
pub use morse::{parse_values, write_values, ValuesError, VertexFunction, VertexKind};
pub use off::{parse_off, write_off, OffError, OffMesh};

use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SurfaceError {
    #[error("triangle #{triangle} refers to vertex {index}, but there are only {vertex_count} vertices")]
    IndexOutOfRange { triangle: usize, index: usize, vertex_count: usize },
    #[error("triangle #{triangle} repeats a vertex")]
    DegenerateTriangle { triangle: usize },
    #[error("triangle #{triangle} duplicates an earlier face")]
    DuplicateTriangle { triangle: usize },
    #[error("edge ({}, {}) lies on {count} triangles, a closed surface needs exactly 2", edge.0, edge.1)]
    EdgeNotOnTwoTriangles { edge: (usize, usize), count: usize },
    #[error("vertex {vertex} lies on no triangle")]
    IsolatedVertex { vertex: usize },
    #[error("the link of vertex {vertex} is not a single cycle")]
    BadVertexLink { vertex: usize },
}

/// A validated triangulation of a closed surface (possibly empty, possibly
/// disconnected, orientable or not).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangulatedSurface {
    vertex_count: usize,
    triangles: Vec<[usize; 3]>,
    /// Unordered edges (lo, hi), sorted and deduplicated.
    edges: Vec<(usize, usize)>,
    /// For each vertex, its link as a closed cycle of neighboring vertices
    /// (the first entry is not repeated at the end).
    links: Vec<Vec<usize>>,
}

impl TriangulatedSurface {
    pub fn new(vertex_count: usize, triangles: Vec<[usize; 3]>) -> Result<Self, SurfaceError> {
        let mut seen = std::collections::BTreeSet::new();
        for (i, t) in triangles.iter().enumerate() {
            for &v in t {
                if v >= vertex_count {
                    return Err(SurfaceError::IndexOutOfRange {
                        triangle: i,
                        index: v,
                        vertex_count,
                    });
                }
            }
            if t[0] == t[1] || t[0] == t[2] || t[1] == t[2] {
                return Err(SurfaceError::DegenerateTriangle { triangle: i });
            }
            let mut key = *t;
            key.sort_unstable();
            if !seen.insert(key) {
                return Err(SurfaceError::DuplicateTriangle { triangle: i });
            }
        }

        // Every edge must border exactly two triangles.
        let mut edge_faces: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for t in &triangles {
            for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
                let e = (a.min(b), a.max(b));
                *edge_faces.entry(e).or_insert(0) += 1;
            }
        }
        for (&edge, &count) in &edge_faces {
            if count != 2 {
                return Err(SurfaceError::EdgeNotOnTwoTriangles { edge, count });
            }
        }
        let edges: Vec<(usize, usize)> = edge_faces.keys().copied().collect();

        // Every vertex link must be one closed cycle.
        let mut opposite: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vertex_count];
        for t in &triangles {
            opposite[t[0]].push((t[1], t[2]));
            opposite[t[1]].push((t[0], t[2]));
            opposite[t[2]].push((t[0], t[1]));
        }
        let mut links = Vec::with_capacity(vertex_count);
        for (v, opp) in opposite.iter().enumerate() {
            if opp.is_empty() {
                return Err(SurfaceError::IsolatedVertex { vertex: v });
            }
            links.push(walk_link(v, opp)?);
        }

        Ok(TriangulatedSurface { vertex_count, triangles, edges, links })
    }

    pub fn from_mesh(mesh: &off::OffMesh) -> Result<Self, SurfaceError> {
        Self::new(mesh.coords.len(), mesh.triangles.clone())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// The link of `v` as a closed cycle of neighbor vertices.
    pub fn link(&self, v: usize) -> &[usize] {
        &self.links[v]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    /// Number of connected components.
    pub fn component_count(&self) -> usize {
        if self.vertex_count == 0 {
            return 0;
        }
        let mut uf = UnionFind::new(self.vertex_count);
        for &(a, b) in &self.edges {
            uf.union(a, b);
        }
        (0..self.vertex_count).filter(|&v| uf.find(v) == v).count()
    }

    /// True when every component admits a consistent triangle orientation.
    pub fn is_orientable(&self) -> bool {
        // Two triangles sharing an edge are consistent when the shared edge
        // runs in opposite directions along their oriented boundaries.  Seed
        // each component with the stored orientation and propagate; a
        // contradiction means a nonorientable component.
        let mut side_faces: BTreeMap<(usize, usize), Vec<(usize, bool)>> = BTreeMap::new();
        for (i, t) in self.triangles.iter().enumerate() {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                // `forward` records whether the boundary traverses the edge
                // from its smaller to its larger vertex index.
                let forward = a < b;
                side_faces.entry((a.min(b), a.max(b))).or_default().push((i, forward));
            }
        }
        let mut flip: Vec<Option<bool>> = vec![None; self.triangles.len()];
        for seed in 0..self.triangles.len() {
            if flip[seed].is_some() {
                continue;
            }
            flip[seed] = Some(false);
            let mut stack = vec![seed];
            while let Some(i) = stack.pop() {
                let fi = flip[i].unwrap();
                let t = self.triangles[i];
                for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                    let key = (a.min(b), a.max(b));
                    for &(j, fwd_j) in &side_faces[&key] {
                        if j == i {
                            continue;
                        }
                        let want = need_flip_j_value(a < b, fi, fwd_j);
                        match flip[j] {
                            None => {
                                flip[j] = Some(want);
                                stack.push(j);
                            }
                            Some(f) if f != want => return false,
                            Some(_) => {}
                        }
                    }
                }
            }
        }
        true
    }

    /// A short label for the homeomorphism type, when recognizable.
    pub fn classification(&self) -> String {
        if self.vertex_count == 0 {
            return "empty surface".into();
        }
        let chi = self.euler_characteristic();
        if self.component_count() != 1 {
            return format!("{} components, total Euler characteristic {chi}", self.component_count());
        }
        if self.is_orientable() {
            match chi {
                2 => "sphere".into(),
                0 => "torus".into(),
                c => format!("orientable genus-{} surface", (2 - c) / 2),
            }
        } else {
            match chi {
                1 => "projective plane".into(),
                0 => "Klein bottle".into(),
                c => format!("nonorientable surface with {} crosscaps", 2 - c),
            }
        }
    }
}

/// Whether triangle `j` must be flipped to orient consistently with triangle
/// `i` across a shared edge, given how each boundary traverses the edge
/// (`fwd`: from smaller to larger vertex index) and `i`'s flip state.
fn need_flip_j_value(fwd_i: bool, flip_i: bool, fwd_j: bool) -> bool {
    let dir_i = fwd_i ^ flip_i;
    // Consistency wants dir_j == !dir_i.
    let dir_j_unflipped = fwd_j;
    dir_j_unflipped == dir_i
}

/// Orders the opposite edges around `v` into a single cycle of link vertices.
fn walk_link(v: usize, opposite: &[(usize, usize)]) -> Result<Vec<usize>, SurfaceError> {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(a, b) in opposite {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    // In a closed surface each link vertex has exactly two link neighbors.
    if adj.values().any(|ns| ns.len() != 2) {
        return Err(SurfaceError::BadVertexLink { vertex: v });
    }
    let start = *adj.keys().next().unwrap();
    let mut cycle = vec![start];
    let mut prev = start;
    let mut cur = adj[&start][0];
    while cur != start {
        cycle.push(cur);
        let ns = &adj[&cur];
        let next = if ns[0] == prev { ns[1] } else { ns[0] };
        prev = cur;
        cur = next;
    }
    if cycle.len() != adj.len() {
        // The walk closed early: the link is several cycles (a pinch point).
        return Err(SurfaceError::BadVertexLink { vertex: v });
    }
    Ok(cycle)
}

/// Minimal union-find over `0..n`.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    /// Appends a fresh singleton set and returns its element.
    pub(crate) fn push(&mut self) -> usize {
        let x = self.parent.len();
        self.parent.push(x);
        x
    }

    pub(crate) fn len(&self) -> usize {
        self.parent.len()
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Attach the larger root under the smaller for determinism.
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

/// Small standard triangulations, used by the realization API and as test
/// fixtures.  Each returns a face list; pair it with the matching vertex
/// count in [`TriangulatedSurface::new`].
pub mod meshes {
    /// Boundary of the 3-simplex: the smallest sphere (4 vertices).
    pub fn tetrahedron() -> Vec<[usize; 3]> {
        vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]
    }

    /// The octahedron sphere: poles 0, 1 and equator 2–3–4–5 (6 vertices).
    pub fn octahedron() -> Vec<[usize; 3]> {
        vec![
            [0, 2, 3],
            [0, 3, 4],
            [0, 4, 5],
            [0, 5, 2],
            [1, 3, 2],
            [1, 4, 3],
            [1, 5, 4],
            [1, 2, 5],
        ]
    }

    /// The 6-vertex projective plane (every pair of vertices is an edge).
    pub fn projective_plane() -> Vec<[usize; 3]> {
        vec![
            [0, 1, 2],
            [0, 2, 3],
            [0, 1, 4],
            [0, 4, 5],
            [0, 3, 5],
            [1, 3, 4],
            [1, 2, 5],
            [2, 3, 4],
            [2, 4, 5],
            [1, 3, 5],
        ]
    }

    /// The 7-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7.
    pub fn torus_seven() -> Vec<[usize; 3]> {
        let mut t = Vec::new();
        for i in 0..7usize {
            t.push([i, (i + 1) % 7, (i + 3) % 7]);
            t.push([i, (i + 2) % 7, (i + 3) % 7]);
        }
        t
    }

    /// A 9-vertex Klein bottle: two copies of the 6-vertex projective plane
    /// with the face {0, 1, 2} removed, glued along that triangle's boundary
    /// (the second copy relabels 3, 4, 5 to 6, 7, 8).
    pub fn klein_nine() -> Vec<[usize; 3]> {
        let mut faces: Vec<[usize; 3]> = projective_plane()
            .into_iter()
            .filter(|f| *f != [0, 1, 2])
            .collect();
        for f in faces.clone() {
            faces.push(f.map(|v| if v >= 3 { v + 3 } else { v }));
        }
        faces
    }
}

#[cfg(test)]
mod tests {
    use super::meshes::*;
    use super::*;

    #[test]
    fn tetrahedron_is_a_sphere() {
        let s = TriangulatedSurface::new(4, tetrahedron()).unwrap();
        assert_eq!(s.euler_characteristic(), 2);
        assert_eq!(s.component_count(), 1);
        assert!(s.is_orientable());
        assert_eq!(s.classification(), "sphere");
        assert_eq!(s.edges().len(), 6);
        assert_eq!(s.link(0).len(), 3);
    }

    #[test]
    fn octahedron_links_are_squares() {
        let s = TriangulatedSurface::new(6, octahedron()).unwrap();
        assert_eq!(s.euler_characteristic(), 2);
        assert!(s.is_orientable());
        for v in 0..6 {
            assert_eq!(s.link(v).len(), 4);
        }
    }

    #[test]
    fn projective_plane_is_nonorientable() {
        let s = TriangulatedSurface::new(6, projective_plane()).unwrap();
        assert_eq!(s.euler_characteristic(), 1);
        assert!(!s.is_orientable());
        assert_eq!(s.classification(), "projective plane");
        // The complete graph on six vertices.
        assert_eq!(s.edges().len(), 15);
    }

    #[test]
    fn glued_projective_planes_form_a_klein_bottle() {
        let s = TriangulatedSurface::new(9, klein_nine()).unwrap();
        assert_eq!(s.euler_characteristic(), 0);
        assert!(!s.is_orientable());
        assert_eq!(s.component_count(), 1);
        assert_eq!(s.classification(), "Klein bottle");
        // The three glued vertices see both halves.
        assert_eq!(s.link(0).len(), 8);
        assert_eq!(s.link(3).len(), 5);
        assert_eq!(s.link(6).len(), 5);
    }

    #[test]
    fn seven_vertex_torus_checks_out() {
        let s = TriangulatedSurface::new(7, torus_seven()).unwrap();
        assert_eq!(s.euler_characteristic(), 0);
        assert!(s.is_orientable());
        assert_eq!(s.classification(), "torus");
        // Every pair of the seven vertices is an edge.
        assert_eq!(s.edges().len(), 21);
        for v in 0..7 {
            assert_eq!(s.link(v).len(), 6);
        }
    }

    #[test]
    fn disjoint_tetrahedra_form_two_components() {
        let mut t = tetrahedron();
        t.extend(tetrahedron().into_iter().map(|tri| tri.map(|v| v + 4)));
        let s = TriangulatedSurface::new(8, t).unwrap();
        assert_eq!(s.component_count(), 2);
        assert_eq!(s.euler_characteristic(), 4);
        assert!(s.is_orientable());
    }

    #[test]
    fn empty_surface_is_allowed() {
        let s = TriangulatedSurface::new(0, vec![]).unwrap();
        assert_eq!(s.euler_characteristic(), 0);
        assert_eq!(s.component_count(), 0);
        assert!(s.is_orientable());
        assert_eq!(s.classification(), "empty surface");
    }

    #[test]
    fn open_and_pinched_complexes_are_rejected() {
        // A single triangle has boundary edges.
        assert!(matches!(
            TriangulatedSurface::new(3, vec![[0, 1, 2]]),
            Err(SurfaceError::EdgeNotOnTwoTriangles { count: 1, .. })
        ));
        // Two tetrahedra glued at vertex 0: its link is two disjoint cycles.
        let mut t = tetrahedron();
        t.extend([[0, 4, 5], [0, 4, 6], [0, 5, 6], [4, 5, 6]]);
        assert!(matches!(
            TriangulatedSurface::new(7, t),
            Err(SurfaceError::BadVertexLink { vertex: 0 })
        ));
    }

    #[test]
    fn malformed_triangles_are_rejected() {
        assert!(matches!(
            TriangulatedSurface::new(3, vec![[0, 1, 5]]),
            Err(SurfaceError::IndexOutOfRange { index: 5, .. })
        ));
        assert!(matches!(
            TriangulatedSurface::new(3, vec![[0, 1, 1]]),
            Err(SurfaceError::DegenerateTriangle { .. })
        ));
        let mut t = tetrahedron();
        t.push([2, 0, 1]); // same face, re-ordered
        assert!(matches!(
            TriangulatedSurface::new(4, t),
            Err(SurfaceError::DuplicateTriangle { triangle: 4 })
        ));
        assert!(matches!(
            TriangulatedSurface::new(5, tetrahedron()),
            Err(SurfaceError::IsolatedVertex { vertex: 4 })
        ));
    }
}
