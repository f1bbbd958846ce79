//! Reeb graph extraction: sweep a generic vertex function across a
//! triangulated surface and collapse every contour to a point.
//!
//! The sweep visits the vertices in symbolic order (value with index
//! tie-break).  Between two consecutive vertices every contour is a circle;
//! each circle is tracked as a connected family of the surface edges whose
//! interiors it crosses.  Families in consecutive bands are glued wherever a
//! contour passes the intermediate vertex level away from that vertex, or
//! slides through a regular vertex.  Every glued family becomes one Reeb
//! edge; every critical vertex becomes one Reeb vertex, whose local model is
//! read off from how many families arrive from below and depart above.

use std::collections::BTreeMap;

use super::morse::{ValuesError, VertexFunction, VertexKind};
use super::{TriangulatedSurface, UnionFind};
use crate::graph::{Extremum, ReebFunction, VertexId, VertexModel};
use crate::height::Height;

/// One extracted Reeb edge: its (lower, upper) endpoints and the surface
/// edges its contour family crosses.
type ContourEdge = ((VertexId, VertexId), Vec<(usize, usize)>);

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExtractError {
    #[error(transparent)]
    Values(#[from] ValuesError),
    #[error(
        "vertex {vertex} is a degenerate critical point: its link crosses the level {alternations} times"
    )]
    DegenerateCritical { vertex: usize, alternations: usize },
}

/// A Reeb graph together with the bookkeeping tying it back to the surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReebExtraction {
    pub graph: ReebFunction,
    /// Maps each Reeb vertex to the critical surface vertex it arose from.
    pub vertex_map: BTreeMap<VertexId, usize>,
    /// Surface edges crossed by each contour family, indexed like
    /// `graph.edges()`.
    pub edge_members: Vec<Vec<(usize, usize)>>,
    /// Whether equal critical values forced a deterministic nudge of the
    /// stored heights.  The contour structure always uses the symbolic order.
    pub perturbed: bool,
}

/// Contour components of the open band between two consecutive levels.
struct Slab {
    /// Surface edge id -> index into the parallel vectors below.
    comp_of_edge: BTreeMap<usize, usize>,
    /// Contour-family node (in the global union-find) per component.
    node: Vec<usize>,
    /// Whether the component owns an edge ending exactly at the band's top
    /// vertex, i.e. whether the contour runs into that vertex.
    ends_at_top: Vec<bool>,
}

pub fn extract_reeb(
    surface: &TriangulatedSurface,
    f: &VertexFunction,
) -> Result<ReebExtraction, ExtractError> {
    f.check_matches(surface)?;
    let n = surface.vertex_count();

    let mut graph = ReebFunction::new();
    if n == 0 {
        return Ok(ReebExtraction {
            graph,
            vertex_map: BTreeMap::new(),
            edge_members: Vec::new(),
            perturbed: false,
        });
    }

    // Vertices in sweep order, and each vertex's rank in that order.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| (f.value(a), a).cmp(&(f.value(b), b)));
    let mut rank = vec![0usize; n];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }

    let kinds: Vec<VertexKind> = (0..n).map(|v| f.classify(surface, v)).collect();
    for (v, kind) in kinds.iter().enumerate() {
        if let VertexKind::Degenerate { alternations } = kind {
            return Err(ExtractError::DegenerateCritical { vertex: v, alternations: *alternations });
        }
    }

    // Surface edges by the rank interval they span, plus reverse lookups.
    let edges = surface.edges();
    let span: Vec<(usize, usize)> = edges
        .iter()
        .map(|&(a, b)| {
            let (ra, rb) = (rank[a], rank[b]);
            (ra.min(rb), ra.max(rb))
        })
        .collect();
    let edge_id: BTreeMap<(usize, usize), usize> =
        edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &(a, b)) in edges.iter().enumerate() {
        incident[a].push(i);
        incident[b].push(i);
    }

    // Each triangle with its corners sorted by rank and its edge ids.
    struct Tri {
        lo: usize,
        mid: usize,
        hi: usize,
        lo_mid: usize,
        lo_hi: usize,
        mid_hi: usize,
    }
    let tris: Vec<Tri> = surface
        .triangles()
        .iter()
        .map(|t| {
            let mut vs = *t;
            vs.sort_by_key(|&v| rank[v]);
            let eid = |a: usize, b: usize| edge_id[&(a.min(b), a.max(b))];
            Tri {
                lo: rank[vs[0]],
                mid: rank[vs[1]],
                hi: rank[vs[2]],
                lo_mid: eid(vs[0], vs[1]),
                lo_hi: eid(vs[0], vs[2]),
                mid_hi: eid(vs[1], vs[2]),
            }
        })
        .collect();

    // Contour families: one growable union-find node per band component,
    // merged wherever a component continues into the next band.
    let mut families = UnionFind::new(0);
    let mut node_members: Vec<Vec<usize>> = Vec::new();
    // (family node, critical rank) end records, resolved after the sweep.
    let mut lower_ends: Vec<(usize, usize)> = Vec::new();
    let mut upper_ends: Vec<(usize, usize)> = Vec::new();
    let mut model_by_rank: BTreeMap<usize, VertexModel> = BTreeMap::new();

    let mut below: Option<Slab> = None;
    for (r, &c) in order.iter().enumerate() {
        // Components of the band between ranks r and r + 1.
        let above: Option<Slab> = if r + 1 < n {
            let active: Vec<usize> =
                (0..edges.len()).filter(|&e| span[e].0 <= r && r < span[e].1).collect();
            let pos: BTreeMap<usize, usize> =
                active.iter().enumerate().map(|(p, &e)| (e, p)).collect();
            let mut uf = UnionFind::new(active.len());
            for t in &tris {
                if t.lo <= r && r < t.hi {
                    // The triangle crosses the band in exactly two of its
                    // edges; those two lie on the same contour.
                    let (e1, e2) =
                        if t.mid > r { (t.lo_mid, t.lo_hi) } else { (t.lo_hi, t.mid_hi) };
                    uf.union(pos[&e1], pos[&e2]);
                }
            }
            let mut index_of_root: BTreeMap<usize, usize> = BTreeMap::new();
            let mut slab = Slab {
                comp_of_edge: BTreeMap::new(),
                node: Vec::new(),
                ends_at_top: Vec::new(),
            };
            for (p, &e) in active.iter().enumerate() {
                let root = uf.find(p);
                let ci = match index_of_root.get(&root) {
                    Some(&ci) => ci,
                    None => {
                        let ci = slab.node.len();
                        index_of_root.insert(root, ci);
                        slab.node.push(families.push());
                        node_members.push(Vec::new());
                        slab.ends_at_top.push(false);
                        ci
                    }
                };
                slab.comp_of_edge.insert(e, ci);
                node_members[slab.node[ci]].push(e);
                if span[e].1 == r + 1 {
                    slab.ends_at_top[ci] = true;
                }
            }
            Some(slab)
        } else {
            None
        };

        // Surface edges ending at, respectively starting from, this vertex.
        let ins: Vec<usize> = incident[c].iter().copied().filter(|&e| span[e].1 == r).collect();
        let outs: Vec<usize> = incident[c].iter().copied().filter(|&e| span[e].0 == r).collect();

        match kinds[c] {
            VertexKind::Regular => {
                // The single contour slides through the vertex.
                let b = below.as_ref().expect("regular vertex with nothing below");
                let a = above.as_ref().expect("regular vertex with nothing above");
                families
                    .union(b.node[b.comp_of_edge[&ins[0]]], a.node[a.comp_of_edge[&outs[0]]]);
            }
            kind => {
                let mut arriving: Vec<usize> = Vec::new();
                if let Some(b) = &below {
                    arriving = ins.iter().map(|e| b.comp_of_edge[e]).collect();
                    arriving.sort_unstable();
                    arriving.dedup();
                    for &ci in &arriving {
                        upper_ends.push((b.node[ci], r));
                    }
                } else {
                    assert!(ins.is_empty(), "edges below the lowest vertex");
                }
                let mut departing: Vec<usize> = Vec::new();
                if let Some(a) = &above {
                    departing = outs.iter().map(|e| a.comp_of_edge[e]).collect();
                    departing.sort_unstable();
                    departing.dedup();
                    for &ci in &departing {
                        lower_ends.push((a.node[ci], r));
                    }
                } else {
                    assert!(outs.is_empty(), "edges above the highest vertex");
                }
                let model = match (arriving.len(), departing.len()) {
                    (0, 1) => VertexModel::Extremum(Extremum::Min),
                    (1, 0) => VertexModel::Extremum(Extremum::Max),
                    (1, 1) => VertexModel::PassThrough,
                    (1, 2) => VertexModel::Fork(1),
                    (2, 1) => VertexModel::Fork(-1),
                    (i, o) => {
                        unreachable!("critical point with {i} contours below and {o} above")
                    }
                };
                let consistent = matches!(
                    (kind, model),
                    (VertexKind::Minimum, VertexModel::Extremum(Extremum::Min))
                        | (VertexKind::Maximum, VertexModel::Extremum(Extremum::Max))
                        | (VertexKind::Saddle, VertexModel::PassThrough | VertexModel::Fork(_))
                );
                assert!(
                    consistent,
                    "star classification {kind:?} disagrees with contour counts at vertex {c}"
                );
                model_by_rank.insert(r, model);
            }
        }

        // Contours crossing this level away from the vertex keep their
        // identity: glue every component not running into the vertex to its
        // continuation, through any of its surviving edges.
        if let (Some(b), Some(a)) = (&below, &above) {
            for (&e, &ci) in &b.comp_of_edge {
                if span[e].1 > r && !b.ends_at_top[ci] {
                    families.union(b.node[ci], a.node[a.comp_of_edge[&e]]);
                }
            }
        }

        below = above;
    }

    // Heights: critical values verbatim, unless two critical vertices share a
    // value; then vertex v gets f(v) + v·δ with δ small enough to keep every
    // strict comparison intact, so the stored heights are pairwise distinct
    // and ordered like the sweep.
    let crit_ranks: Vec<usize> = (0..n).filter(|&r| kinds[order[r]] != VertexKind::Regular).collect();
    let crit_vertices: Vec<usize> = crit_ranks.iter().map(|&r| order[r]).collect();
    let perturbed = crit_vertices.windows(2).any(|w| f.value(w[0]) == f.value(w[1]));
    let heights: Vec<Height> = if !perturbed {
        crit_vertices.iter().map(|&v| f.value(v).clone()).collect()
    } else {
        let mut min_gap: Option<Height> = None;
        for w in crit_vertices.windows(2) {
            let gap = f.value(w[1]).sub(f.value(w[0]));
            if gap > Height::from_int(0) && min_gap.as_ref().is_none_or(|g| gap < *g) {
                min_gap = Some(gap);
            }
        }
        let delta = min_gap.unwrap_or_else(|| Height::from_int(1)).divided_by_int(2 * n as i64);
        crit_vertices.iter().map(|&v| f.value(v).add(&delta.times_int(v as i64))).collect()
    };

    let mut vertex_map = BTreeMap::new();
    let mut id_by_rank: BTreeMap<usize, VertexId> = BTreeMap::new();
    for (k, &r) in crit_ranks.iter().enumerate() {
        let id = graph.add_vertex(heights[k].clone());
        vertex_map.insert(id, order[r]);
        id_by_rank.insert(r, id);
    }

    // Resolve the union-find and read off one Reeb edge per family.
    let mut members_of_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (node, members) in node_members.iter().enumerate() {
        let root = families.find(node);
        members_of_root.entry(root).or_default().extend(members.iter().copied());
    }
    let mut lower_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    for (node, r) in lower_ends {
        let prev = lower_of_root.insert(families.find(node), r);
        assert!(prev.is_none(), "contour family with two lower ends");
    }
    let mut upper_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    for (node, r) in upper_ends {
        let prev = upper_of_root.insert(families.find(node), r);
        assert!(prev.is_none(), "contour family with two upper ends");
    }

    let mut reeb_edges: Vec<ContourEdge> = Vec::new();
    for (root, mut members) in members_of_root {
        let lo = *lower_of_root.get(&root).expect("contour family with no lower end");
        let hi = *upper_of_root.get(&root).expect("contour family with no upper end");
        members.sort_unstable();
        members.dedup();
        reeb_edges
            .push(((id_by_rank[&lo], id_by_rank[&hi]), members.iter().map(|&e| edges[e]).collect()));
    }
    reeb_edges.sort();
    let mut edge_members = Vec::new();
    for ((lo, hi), members) in reeb_edges {
        graph.add_edge(lo, hi);
        edge_members.push(members);
    }

    for (&r, &model) in &model_by_rank {
        assert_eq!(graph.classify(id_by_rank[&r]), Some(model), "edge degrees disagree with model");
    }
    assert!(graph.validate().is_valid(), "extracted graph failed validation");

    Ok(ReebExtraction { graph, vertex_map, edge_members, perturbed })
}
