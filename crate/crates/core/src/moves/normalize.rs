//! Canonical representatives and normalization.
//!
//! Every valid graph can be driven by moves to a canonical representative
//! depending only on its invariant: [`canonical`] builds that representative
//! and [`normalize`] produces a replayable trace reaching it.
//!
//! The normalization strategy disassembles the graph completely and rebuilds
//! the canonical shape, which keeps every step a local pattern match:
//!
//! 1. cut every original edge (move b), leaving one star per original
//!    vertex: extrema become isolated edges, pass-throughs become min–pass–max
//!    strands, forks become four-vertex stars;
//! 2. kill all isolated-edge components (move a backward);
//! 3. cancel pass-through strands in pairs: slide one above the other
//!    (height reparametrization), join (b backward), erase the adjacent
//!    pass pair (i backward), kill the leftover edge (a backward);
//! 4. cancel a split star against a merge star: join them into a
//!    merge-below-split pattern and unpinch it (g backward), then kill the
//!    two leftover edges;
//! 5. chain the remaining same-sign fork stars into a staircase, each join
//!    consuming the previous top star's outermost extremum;
//! 6. attach the surviving pass strand (if any) at the foot (or head, for
//!    negative total sign) of the staircase;
//! 7. if nothing remains, give birth to a single edge (move a);
//! 8. reparametrize onto the canonical integer heights.

use crate::graph::{Extremum, ReebFunction, Sigma, ValidationReport, VertexId, VertexModel};
use crate::height::Height;
use crate::iso::canonical_key;
use crate::moves::trace::{MoveTrace, TraceBuilder};
use crate::moves::{enumerate_sites, Direction, MoveKind, MoveSite};
use std::collections::BTreeMap;

/// The canonical representative of an invariant class: a single component
/// with integer heights 0..V.
///
/// - `(0, 0)`: a single min–max edge (the trivial class is represented by a
///   graph that is realizable on a sphere, not by the empty graph);
/// - `(0, 1)`: min–pass–max;
/// - `(n > 0, d)`: a staircase of `n` splits over one minimum — each split
///   carries one hanging maximum, the top one two — with a pass-through
///   inserted above the minimum when `d = 1`;
/// - `(n < 0, d)`: the mirror image of `(-n, d)`.
pub fn canonical(sigma: Sigma) -> ReebFunction {
    let n = sigma.t.unsigned_abs();
    let mut g = ReebFunction::new();
    let mut level = 0i64;
    let mut next = |g: &mut ReebFunction| {
        let v = g.add_vertex(Height::from_int(level));
        level += 1;
        v
    };
    let bottom = next(&mut g);
    let mut below = bottom;
    if sigma.d == 1 {
        let pass = next(&mut g);
        g.add_edge(below, pass);
        below = pass;
    }
    if n == 0 {
        let top = next(&mut g);
        g.add_edge(below, top);
    } else {
        for i in 0..n {
            let fork = next(&mut g);
            g.add_edge(below, fork);
            let hang = next(&mut g);
            g.add_edge(fork, hang);
            if i + 1 == n {
                let top = next(&mut g);
                g.add_edge(fork, top);
            }
            below = fork;
        }
    }
    if sigma.t < 0 {
        let flipped = g.flipped();
        let ranks: BTreeMap<VertexId, Height> = flipped
            .vertices_by_height()
            .into_iter()
            .enumerate()
            .map(|(i, v)| (v, Height::from_int(i as i64)))
            .collect();
        flipped.with_heights(&ranks)
    } else {
        g
    }
}

#[derive(Clone, Debug)]
pub struct NormalizeOutcome {
    pub sigma: Sigma,
    /// Trace from the input graph to the canonical representative.
    pub trace: MoveTrace,
}

impl NormalizeOutcome {
    pub fn normalized(&self) -> &ReebFunction {
        &self.trace.end
    }

    /// Replays the trace and confirms it lands on the canonical
    /// representative of `sigma`.
    pub fn verify(&self) -> Result<(), String> {
        let end = self.trace.replay().map_err(|e| e.to_string())?;
        if canonical_key(&end) != canonical_key(&canonical(self.sigma)) {
            return Err("trace does not end at the canonical representative".into());
        }
        Ok(())
    }
}

struct PassPiece {
    min: VertexId,
    pass: VertexId,
    max: VertexId,
}

struct ForkPiece {
    /// The degree-3 center.
    fork: VertexId,
    /// The single extremum on the trunk side (min for a split, max for a merge).
    trunk_end: VertexId,
}

fn collect_pieces(g: &ReebFunction) -> (Vec<PassPiece>, Vec<ForkPiece>, Vec<ForkPiece>) {
    let mut passes = Vec::new();
    let mut splits = Vec::new();
    let mut merges = Vec::new();
    for comp in g.components() {
        let mut vs: Vec<VertexId> = comp.into_iter().collect();
        vs.sort_by(|a, b| g.height(*a).cmp(g.height(*b)));
        let models: Vec<VertexModel> = vs.iter().map(|&v| g.classify(v).expect("valid graph")).collect();
        match models.as_slice() {
            [VertexModel::Extremum(Extremum::Min), VertexModel::PassThrough, VertexModel::Extremum(Extremum::Max)] => {
                passes.push(PassPiece { min: vs[0], pass: vs[1], max: vs[2] });
            }
            [VertexModel::Extremum(Extremum::Min), VertexModel::Fork(1), VertexModel::Extremum(Extremum::Max), VertexModel::Extremum(Extremum::Max)] => {
                splits.push(ForkPiece { fork: vs[1], trunk_end: vs[0] });
            }
            [VertexModel::Extremum(Extremum::Min), VertexModel::Extremum(Extremum::Min), VertexModel::Fork(-1), VertexModel::Extremum(Extremum::Max)] => {
                merges.push(ForkPiece { fork: vs[2], trunk_end: vs[3] });
            }
            _ => {}
        }
    }
    passes.sort_by_key(|p| p.pass);
    splits.sort_by_key(|p| p.fork);
    merges.sort_by_key(|p| p.fork);
    (passes, splits, merges)
}

/// Reparametrizes so the given component sits entirely above (or below) the
/// rest of the graph, keeping its internal order. No-op when already placed.
fn shift_component(b: &mut TraceBuilder, anchor: VertexId, above: bool) {
    let g = b.current();
    let comp = g.component_of(anchor);
    let rest_bound = g
        .vertex_ids()
        .filter(|v| !comp.contains(v))
        .map(|v| g.height(v).clone())
        .reduce(|a, x| if above { a.max(x) } else { a.min(x) });
    let base = match rest_bound {
        Some(h) => h,
        None => return,
    };
    let mut sorted: Vec<VertexId> = comp.iter().copied().collect();
    sorted.sort_by(|x, y| g.height(*x).cmp(g.height(*y)));
    let mut map: BTreeMap<VertexId, Height> = g.vertex_ids().map(|v| (v, g.height(v).clone())).collect();
    let count = sorted.len() as i64;
    for (i, &v) in sorted.iter().enumerate() {
        let offset = if above { i as i64 + 1 } else { i as i64 - count };
        map.insert(v, base.shifted_by_int(offset));
    }
    let identity = map.iter().all(|(v, h)| b.current().height(*v) == h);
    if !identity {
        b.reparametrize(map).expect("component shift preserves order");
    }
}

fn apply_step(b: &mut TraceBuilder, site: &MoveSite) {
    b.apply(site).unwrap_or_else(|e| panic!("normalization step {site:?} must apply: {e}"));
}

/// Kills every isolated-edge component.
fn sweep_deaths(b: &mut TraceBuilder) {
    loop {
        let sites = enumerate_sites(b.current(), MoveKind::Birth, Direction::Backward);
        match sites.into_iter().next() {
            Some(site) => apply_step(b, &site),
            None => break,
        }
    }
}

/// Drives `g` to the canonical representative of its invariant, returning a
/// replayable trace. Fails only if `g` is invalid.
pub fn normalize(g: &ReebFunction) -> Result<NormalizeOutcome, ValidationReport> {
    let sigma = g.sigma()?;
    let target = canonical(sigma);
    let mut b = TraceBuilder::new(g.clone());

    if canonical_key(b.current()) != canonical_key(&target) {
        // 1. Disassemble into stars.
        let original_edges: Vec<(VertexId, VertexId)> = b.current().edges().to_vec();
        for (lo, hi) in original_edges {
            apply_step(&mut b, &MoveSite::Cut { lower: lo, upper: hi });
        }
        // 2. Clear the extremum stars.
        sweep_deaths(&mut b);
        // 3. Cancel pass strands in pairs.
        loop {
            let (passes, _, _) = collect_pieces(b.current());
            if passes.len() < 2 {
                break;
            }
            let (p1, p2) = (&passes[0], &passes[1]);
            shift_component(&mut b, p2.pass, true);
            apply_step(&mut b, &MoveSite::Join { max: p1.max, min: p2.min });
            apply_step(&mut b, &MoveSite::PassErase { lower: p1.pass, upper: p2.pass });
            apply_step(&mut b, &MoveSite::Death { lower: p1.min, upper: p2.max });
        }
        // 4. Cancel opposite fork stars.
        loop {
            let (_, splits, merges) = collect_pieces(b.current());
            let (Some(s), Some(m)) = (splits.first(), merges.first()) else { break };
            shift_component(&mut b, s.fork, true);
            apply_step(&mut b, &MoveSite::Join { max: m.trunk_end, min: s.trunk_end });
            apply_step(&mut b, &MoveSite::Unpinch { merge: m.fork, split: s.fork, crossed: false });
            sweep_deaths(&mut b);
        }
        // 5. Chain the remaining same-sign stars into a staircase.
        let (_, splits, merges) = collect_pieces(b.current());
        let mut chain_top: Option<VertexId> = None;
        for piece in &splits {
            match chain_top {
                None => chain_top = Some(piece.fork),
                Some(top) => {
                    let mut hangs = b.current().up_neighbors(top);
                    hangs.sort_by(|x, y| b.current().height(*x).cmp(b.current().height(*y)));
                    shift_component(&mut b, piece.fork, true);
                    apply_step(&mut b, &MoveSite::Join { max: hangs[1], min: piece.trunk_end });
                    chain_top = Some(piece.fork);
                }
            }
        }
        let mut chain_bottom: Option<VertexId> = None;
        for piece in &merges {
            match chain_bottom {
                None => chain_bottom = Some(piece.fork),
                Some(bottom) => {
                    let mut hangs = b.current().down_neighbors(bottom);
                    hangs.sort_by(|x, y| b.current().height(*x).cmp(b.current().height(*y)));
                    shift_component(&mut b, piece.fork, false);
                    apply_step(&mut b, &MoveSite::Join { max: piece.trunk_end, min: hangs[0] });
                    chain_bottom = Some(piece.fork);
                }
            }
        }
        // 6. Attach the leftover pass strand to the staircase.
        let (passes, _, _) = collect_pieces(b.current());
        if let Some(p) = passes.first() {
            if let Some(top) = chain_top {
                let foot = b
                    .current()
                    .component_of(top)
                    .into_iter()
                    .find(|&v| b.current().classify(v) == Some(VertexModel::Extremum(Extremum::Min)))
                    .expect("staircase has a unique minimum");
                shift_component(&mut b, p.pass, false);
                apply_step(&mut b, &MoveSite::Join { max: p.max, min: foot });
            } else if let Some(bottom) = chain_bottom {
                let head = b
                    .current()
                    .component_of(bottom)
                    .into_iter()
                    .find(|&v| b.current().classify(v) == Some(VertexModel::Extremum(Extremum::Max)))
                    .expect("staircase has a unique maximum");
                shift_component(&mut b, p.pass, true);
                apply_step(&mut b, &MoveSite::Join { max: head, min: p.min });
            }
        }
        // 7. The trivial class rebuilds from nothing.
        if b.current().vertex_count() == 0 {
            apply_step(&mut b, &MoveSite::Birth);
        }
    }

    // 8. Settle on the canonical integer heights.
    let final_map: BTreeMap<VertexId, Height> = {
        let current = b.current();
        let targets: Vec<Height> = target.vertices_by_height().iter().map(|&v| target.height(v).clone()).collect();
        current.vertices_by_height().into_iter().zip(targets).collect()
    };
    let identity = final_map.iter().all(|(v, h)| b.current().height(*v) == h);
    if !identity {
        b.reparametrize(final_map).expect("rank map onto canonical heights preserves order");
    }

    let trace = b.finish();
    assert_eq!(
        canonical_key(&trace.end),
        canonical_key(&target),
        "normalization must land on the canonical representative"
    );
    Ok(NormalizeOutcome { sigma, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::random_graph;
    use crate::iso::is_isomorphic;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn h(s: &str) -> Height {
        Height::parse(s).unwrap()
    }

    #[test]
    fn canonical_shapes_have_the_right_invariants() {
        for t in -4i64..=4 {
            for d in 0u8..=1 {
                let sigma = Sigma { t, d };
                let g = canonical(sigma);
                assert!(g.validate().is_valid(), "σ={sigma}: {}", g.validate());
                assert_eq!(g.sigma().unwrap(), sigma);
                assert_eq!(g.components().len(), 1, "σ={sigma}");
                assert_eq!(g.count_model(VertexModel::PassThrough), d as usize);
                // Heights are exactly 0..V.
                let vs = g.vertices_by_height();
                for (i, &v) in vs.iter().enumerate() {
                    assert_eq!(g.height(v), &Height::from_int(i as i64));
                }
            }
        }
    }

    #[test]
    fn canonical_is_mirror_symmetric() {
        for t in 1i64..=4 {
            for d in 0u8..=1 {
                let neg = canonical(Sigma { t: -t, d });
                let flipped = canonical(Sigma { t, d }).flipped();
                assert!(is_isomorphic(&neg, &flipped));
            }
        }
    }

    #[test]
    fn canonical_sizes() {
        assert_eq!(canonical(Sigma { t: 0, d: 0 }).vertex_count(), 2);
        assert_eq!(canonical(Sigma { t: 0, d: 1 }).vertex_count(), 3);
        assert_eq!(canonical(Sigma { t: 3, d: 0 }).vertex_count(), 8); // 1 min + 3 forks + 2 hanging + 2 top
        assert_eq!(canonical(Sigma { t: -3, d: 1 }).vertex_count(), 9);
    }

    #[test]
    fn normalize_empty_graph_births_the_trivial_representative() {
        let out = normalize(&ReebFunction::new()).unwrap();
        assert_eq!(out.sigma, Sigma { t: 0, d: 0 });
        assert_eq!(out.trace.move_count(), 1);
        out.verify().unwrap();
    }

    #[test]
    fn normalize_single_edge_needs_no_moves() {
        let mut g = ReebFunction::new();
        let a = g.add_vertex(h("-2.5"));
        let b = g.add_vertex(h("7"));
        g.add_edge(a, b);
        let out = normalize(&g).unwrap();
        assert_eq!(out.trace.move_count(), 0);
        out.verify().unwrap();
        assert!(is_isomorphic(out.normalized(), &canonical(Sigma { t: 0, d: 0 })));
    }

    #[test]
    fn normalize_bigon_reaches_the_trivial_representative() {
        let mut g = ReebFunction::new();
        let a = g.add_vertex(h("0"));
        let s = g.add_vertex(h("1"));
        let m = g.add_vertex(h("2"));
        let b2 = g.add_vertex(h("3"));
        g.add_edge(a, s);
        g.add_edge(s, m);
        g.add_edge(s, m);
        g.add_edge(m, b2);
        let out = normalize(&g).unwrap();
        assert_eq!(out.sigma, Sigma { t: 0, d: 0 });
        out.verify().unwrap();
    }

    #[test]
    fn normalize_pass_strand_of_three() {
        // min—pass—pass—pass—max has d = 1.
        let mut g = ReebFunction::new();
        let vs: Vec<VertexId> = (0..5).map(|i| g.add_vertex(Height::from_int(i))).collect();
        for w in vs.windows(2) {
            g.add_edge(w[0], w[1]);
        }
        let out = normalize(&g).unwrap();
        assert_eq!(out.sigma, Sigma { t: 0, d: 1 });
        out.verify().unwrap();
        assert!(is_isomorphic(out.normalized(), &canonical(Sigma { t: 0, d: 1 })));
    }

    #[test]
    fn normalize_random_graphs_and_replay() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [0usize, 2, 3, 4, 5, 6, 8, 10] {
            for _ in 0..10 {
                let g = random_graph(n, &mut rng);
                let out = normalize(&g).unwrap();
                out.verify().unwrap_or_else(|e| panic!("n={n}: {e}"));
                assert!(is_isomorphic(out.normalized(), &canonical(out.sigma)));
            }
        }
    }
}
