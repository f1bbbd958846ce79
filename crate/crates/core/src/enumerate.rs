//! Generation of valid graphs: a seeded random sampler and an exhaustive
//! enumerator of isomorphism classes, both built on the same upward sweep.
//!
//! The sweep places vertices at integer heights 0, 1, 2, … while maintaining
//! the multiset of "open" edge ends dangling upward. Each new vertex consumes
//! some open ends (its downward edges) and opens new ones (its upward edges):
//! a minimum opens 1, a maximum consumes 1, a pass-through consumes 1 and
//! opens 1, an upward fork consumes 1 and opens 2, a downward fork consumes 2
//! and opens 1. A sweep that ends with no open ends yields exactly a valid
//! graph, and every valid graph arises this way, so the sweep is a complete
//! generator. Self-loops cannot occur because open ends always originate
//! strictly below the new vertex.

use crate::graph::{ReebFunction, VertexId};
use crate::height::Height;
use crate::iso::{canonical_key, CanonicalKey};
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::BTreeMap;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Pattern {
    Min,
    Max,
    Pass,
    ForkUp,
    ForkDown,
}

const PATTERNS: [Pattern; 5] = [Pattern::Min, Pattern::Max, Pattern::Pass, Pattern::ForkUp, Pattern::ForkDown];

impl Pattern {
    fn consumes(self) -> usize {
        match self {
            Pattern::Min => 0,
            Pattern::Max | Pattern::Pass | Pattern::ForkUp => 1,
            Pattern::ForkDown => 2,
        }
    }

    fn opens(self) -> usize {
        match self {
            Pattern::Max => 0,
            Pattern::Min | Pattern::Pass | Pattern::ForkDown => 1,
            Pattern::ForkUp => 2,
        }
    }
}

/// Can a sweep with `open` dangling ends and `remaining` vertices still
/// finish cleanly? Each vertex lowers the open count by at most one, and a
/// lone final vertex must be a maximum closing exactly one end.
fn feasible(open: usize, remaining: usize) -> bool {
    open <= remaining && !(open == 0 && remaining == 1)
}

fn build(patterns: &[(Pattern, Vec<usize>)]) -> ReebFunction {
    // `Vec<usize>` holds indices into the open-end list at the time of the
    // step; replayed here to produce the actual graph.
    let mut g = ReebFunction::new();
    let mut open: Vec<VertexId> = Vec::new();
    for (i, (p, picks)) in patterns.iter().enumerate() {
        let v = g.add_vertex(Height::from_int(i as i64));
        // Remove in descending index order so earlier indices stay valid.
        let mut picks = picks.clone();
        picks.sort_unstable_by(|a, b| b.cmp(a));
        for &k in &picks {
            let src = open.remove(k);
            g.add_edge(src, v);
        }
        for _ in 0..p.opens() {
            open.push(v);
        }
    }
    assert!(open.is_empty(), "sweep left open ends");
    g
}

/// A uniformly-seeded (not uniformly-distributed) random valid graph with
/// exactly `n` vertices at integer heights 0..n. Panics for `n == 1`, the
/// only size with no valid graph.
pub fn random_graph(n: usize, rng: &mut impl Rng) -> ReebFunction {
    assert!(n != 1, "no valid graph has exactly one vertex");
    let mut steps: Vec<(Pattern, Vec<usize>)> = Vec::with_capacity(n);
    let mut open = 0usize;
    for i in 0..n {
        let remaining = n - i;
        let choices: Vec<Pattern> = PATTERNS
            .into_iter()
            .filter(|p| p.consumes() <= open && feasible(open - p.consumes() + p.opens(), remaining - 1))
            .collect();
        let p = *choices.choose(rng).expect("feasible state has a move");
        let mut picks: Vec<usize> = (0..open).collect();
        picks.shuffle(rng);
        picks.truncate(p.consumes());
        open = open - p.consumes() + p.opens();
        steps.push((p, picks));
    }
    build(&steps)
}

/// Distinct one-end choices: one index per distinct source vertex.
fn choices_one(open: &[VertexId]) -> Vec<Vec<usize>> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for (i, &s) in open.iter().enumerate() {
        if seen.insert(s) {
            out.push(vec![i]);
        }
    }
    out
}

/// Distinct two-end choices: one index pair per distinct unordered source
/// pair. A repeated source (making a doubled edge) needs two instances.
fn choices_two(open: &[VertexId]) -> Vec<Vec<usize>> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for i in 0..open.len() {
        for j in (i + 1)..open.len() {
            let key = if open[i] <= open[j] { (open[i], open[j]) } else { (open[j], open[i]) };
            if seen.insert(key) {
                out.push(vec![i, j]);
            }
        }
    }
    out
}

/// One representative per isomorphism class with at most `max_vertices`
/// vertices (the empty graph included).
pub fn enumerate_classes(max_vertices: usize) -> Vec<ReebFunction> {
    let mut classes: BTreeMap<CanonicalKey, ReebFunction> = BTreeMap::new();
    for n in 0..=max_vertices {
        let mut steps: Vec<(Pattern, Vec<usize>)> = Vec::new();
        let mut open: Vec<VertexId> = Vec::new();
        dfs(n, &mut steps, &mut open, &mut |steps| {
            let g = build(steps);
            classes.entry(canonical_key(&g)).or_insert(g);
        });
    }
    classes.into_values().collect()
}

fn dfs(
    remaining: usize,
    steps: &mut Vec<(Pattern, Vec<usize>)>,
    open: &mut Vec<VertexId>,
    emit: &mut impl FnMut(&[(Pattern, Vec<usize>)]),
) {
    if remaining == 0 {
        if open.is_empty() {
            emit(steps);
        }
        return;
    }
    let v = VertexId(steps.len() as u64);
    for p in PATTERNS {
        if p.consumes() > open.len() || !feasible(open.len() - p.consumes() + p.opens(), remaining - 1) {
            continue;
        }
        let pick_sets: Vec<Vec<usize>> = match p.consumes() {
            0 => vec![vec![]],
            1 => choices_one(open),
            2 => choices_two(open),
            _ => unreachable!(),
        };
        for picks in pick_sets {
            let mut removed: Vec<(usize, VertexId)> = Vec::new();
            let mut sorted = picks.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            for &k in &sorted {
                removed.push((k, open.remove(k)));
            }
            for _ in 0..p.opens() {
                open.push(v);
            }
            steps.push((p, picks));
            dfs(remaining - 1, steps, open, emit);
            steps.pop();
            for _ in 0..p.opens() {
                open.pop();
            }
            for &(k, s) in removed.iter().rev() {
                open.insert(k, s);
            }
        }
    }
}
