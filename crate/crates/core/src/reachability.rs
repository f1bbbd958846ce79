//! Breadth-first exploration of the move graph: which isomorphism classes
//! can be rewritten into which, one move at a time.
//!
//! States are canonical keys (one per class), and the neighbors of a class
//! are the results of every enumerable move applied with default fresh
//! heights.  Since components slide freely past each other, the default
//! enumeration misses cross-component configurations; those are synthesized
//! explicitly, by re-interleaving every pair of components in all possible
//! ways and attempting the two moves that can fuse components — a join
//! (cut, backward) and a pinch — across the pair.
//!
//! This search is deliberately independent of the normalization procedure:
//! it knows nothing about canonical shapes and simply explores, so it can
//! confirm from the outside that classes with equal invariants are connected
//! and classes with different invariants never meet.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::graph::{ReebFunction, VertexId};
use crate::height::Height;
use crate::iso::{canonical_key, CanonicalKey};
use crate::moves::{apply, enumerate_sites, Direction, MoveKind, MoveSite};

/// Result of a targeted search.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// Whether the target class was reached.
    pub found: bool,
    /// Whether the entire reachable set under the caps was explored without
    /// finding the target — a definitive negative for this vertex budget.
    pub exhausted: bool,
    /// Number of classes visited.
    pub classes: usize,
}

/// Result of an untargeted exploration.
#[derive(Clone, Debug)]
pub struct ReachableSet {
    pub classes: BTreeSet<CanonicalKey>,
    /// False when the class budget stopped the search early.
    pub exhausted: bool,
}

/// Searches for a move path from `a`'s class to `b`'s class, visiting only
/// graphs with at most `max_vertices` vertices and at most `max_classes`
/// distinct classes.
pub fn search_connection(
    a: &ReebFunction,
    b: &ReebFunction,
    max_vertices: usize,
    max_classes: usize,
) -> SearchOutcome {
    let target = canonical_key(b);
    let (classes, found, exhausted) = bfs(a, max_vertices, max_classes, Some(&target));
    SearchOutcome { found, exhausted, classes: classes.len() }
}

/// Explores every class reachable from `start` under the caps.
pub fn reachable_classes(
    start: &ReebFunction,
    max_vertices: usize,
    max_classes: usize,
) -> ReachableSet {
    let (classes, _, exhausted) = bfs(start, max_vertices, max_classes, None);
    ReachableSet { classes, exhausted }
}

fn bfs(
    start: &ReebFunction,
    max_vertices: usize,
    max_classes: usize,
    target: Option<&CanonicalKey>,
) -> (BTreeSet<CanonicalKey>, bool, bool) {
    let start_key = canonical_key(start);
    if target == Some(&start_key) {
        return (BTreeSet::from([start_key]), true, false);
    }
    let mut seen = BTreeSet::from([start_key]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(g) = queue.pop_front() {
        for next in neighbors(&g, max_vertices) {
            let key = canonical_key(&next);
            if target == Some(&key) {
                seen.insert(key);
                return (seen, true, false);
            }
            if seen.insert(key) {
                if seen.len() >= max_classes {
                    return (seen, false, false);
                }
                queue.push_back(next);
            }
        }
    }
    (seen, false, true)
}

/// Every class one move away from `g`, within the vertex budget.
fn neighbors(g: &ReebFunction, max_vertices: usize) -> Vec<ReebFunction> {
    let mut out = Vec::new();
    let mut push = |h: ReebFunction| {
        if h.vertex_count() <= max_vertices {
            out.push(h);
        }
    };
    for kind in MoveKind::ALL {
        for dir in [Direction::Forward, Direction::Backward] {
            for site in enumerate_sites(g, kind, dir) {
                if let Ok(applied) = apply(g, &site) {
                    push(applied.graph);
                }
            }
        }
    }
    let comps = g.components();
    for i in 0..comps.len() {
        for j in (i + 1)..comps.len() {
            for variant in interleavings(g, &comps[i], &comps[j]) {
                for site in cross_sites(&variant, &comps[i], &comps[j]) {
                    if let Ok(applied) = apply(&variant, &site) {
                        push(applied.graph);
                    }
                }
            }
        }
    }
    out
}

/// Joins and pinches of `g` acting across the two given components.
fn cross_sites(
    g: &ReebFunction,
    ca: &BTreeSet<VertexId>,
    cb: &BTreeSet<VertexId>,
) -> Vec<MoveSite> {
    let crosses = |u: VertexId, v: VertexId| {
        (ca.contains(&u) && cb.contains(&v)) || (cb.contains(&u) && ca.contains(&v))
    };
    let mut sites = Vec::new();
    for site in enumerate_sites(g, MoveKind::Cut, Direction::Backward) {
        if let MoveSite::Join { max, min } = site {
            if crosses(max, min) {
                sites.push(site);
            }
        }
    }
    for site in enumerate_sites(g, MoveKind::Pinch, Direction::Forward) {
        if let MoveSite::Pinch { first, second } = site {
            if crosses(first.0, second.0) {
                sites.push(site);
            }
        }
    }
    sites
}

/// All reparametrizations of `g` that rearrange how the two given components
/// interleave in height, leaving every other component parked below.  Each
/// result is in the same class as `g`.
fn interleavings(
    g: &ReebFunction,
    ca: &BTreeSet<VertexId>,
    cb: &BTreeSet<VertexId>,
) -> Vec<ReebFunction> {
    let by_height = |set: &BTreeSet<VertexId>| -> Vec<VertexId> {
        let mut vs: Vec<VertexId> = set.iter().copied().collect();
        vs.sort_by(|x, y| (g.height(*x), *x).cmp(&(g.height(*y), *y)));
        vs
    };
    let sa = by_height(ca);
    let sb = by_height(cb);
    let rest: Vec<VertexId> = g
        .vertices_by_height()
        .into_iter()
        .filter(|v| !ca.contains(v) && !cb.contains(v))
        .collect();
    let (p, q) = (sa.len(), sb.len());
    let mut out = Vec::new();
    for mask in 0u32..(1 << (p + q)) {
        if mask.count_ones() as usize != p {
            continue;
        }
        let mut heights: BTreeMap<VertexId, Height> = BTreeMap::new();
        let mut level = 0i64;
        let mut place = |v: VertexId, heights: &mut BTreeMap<VertexId, Height>| {
            heights.insert(v, Height::from_int(level));
            level += 1;
        };
        for &v in &rest {
            place(v, &mut heights);
        }
        let (mut ia, mut ib) = (0usize, 0usize);
        for k in 0..(p + q) {
            if mask & (1 << k) != 0 {
                place(sa[ia], &mut heights);
                ia += 1;
            } else {
                place(sb[ib], &mut heights);
                ib += 1;
            }
        }
        out.push(g.with_heights(&heights));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cobordism::CobordismClass;
    use crate::graph::Sigma;

    fn canonical(t: i64, d: u8) -> ReebFunction {
        CobordismClass::new(t, d).realize()
    }

    #[test]
    fn a_bigon_collapses_to_the_plain_arc() {
        // min — split = merge — max is one move away from min — max.
        let arc = canonical(0, 0);
        let site = MoveSite::BigonInsert {
            lower: arc.vertices_by_height()[0],
            upper: arc.vertices_by_height()[1],
        };
        let bigon = apply(&arc, &site).unwrap().graph;
        let outcome = search_connection(&bigon, &arc, 6, 100);
        assert!(outcome.found);
    }

    #[test]
    fn two_arcs_fuse_into_one() {
        let one = canonical(0, 0);
        let two = one.disjoint_union(&one);
        let outcome = search_connection(&two, &one, 6, 500);
        assert!(outcome.found);
    }

    #[test]
    fn rank_variants_of_the_two_split_tree_are_connected() {
        // Same oriented tree, two different height interleavings of a
        // hanging maximum: distinct classes, yet connected by moves.
        let mut a = ReebFunction::new();
        let at = |g: &mut ReebFunction, h: i64| g.add_vertex(Height::from_int(h));
        let bottom = at(&mut a, 0);
        let s1 = at(&mut a, 1);
        let hang = at(&mut a, 2);
        let s2 = at(&mut a, 3);
        let top1 = at(&mut a, 4);
        let top2 = at(&mut a, 5);
        a.add_edge(bottom, s1);
        a.add_edge(s1, hang);
        a.add_edge(s1, s2);
        a.add_edge(s2, top1);
        a.add_edge(s2, top2);
        // Variant: the hanging maximum rises above everything else.
        let mut heights: std::collections::BTreeMap<VertexId, Height> =
            a.vertex_ids().map(|v| (v, a.height(v).clone())).collect();
        heights.insert(hang, Height::from_int(9));
        let b = a.with_heights(&heights);
        assert_ne!(canonical_key(&a), canonical_key(&b));
        assert_eq!(a.sigma().unwrap(), b.sigma().unwrap());
        let outcome = search_connection(&a, &b, 8, 3000);
        assert!(outcome.found);
    }

    #[test]
    fn different_invariants_never_meet() {
        let outcome = search_connection(&canonical(1, 0), &canonical(0, 0), 5, 10_000);
        assert!(!outcome.found);
        assert!(outcome.exhausted, "search should exhaust the small budget fiber");
    }

    #[test]
    fn exploration_stays_inside_one_fiber() {
        let start = canonical(0, 1);
        let set = reachable_classes(&start, 5, 10_000);
        assert!(set.exhausted);
        for key in &set.classes {
            assert_eq!(key.sigma(), Sigma { t: 0, d: 1 });
        }
    }
}
