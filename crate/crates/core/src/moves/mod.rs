//! The eleven local moves on abstract Reeb functions.
//!
//! Each move rewrites a small pattern of vertices and edges; all of them
//! leave the invariant [`Sigma`](crate::graph::Sigma) unchanged, and together
//! with order-preserving height changes they connect exactly the graphs with
//! equal invariants. The moves, labeled `a` through `k`:
//!
//! | letter | forward | backward |
//! |--------|---------|----------|
//! | a | birth of an isolated min–max edge | death of such a component |
//! | b | cut an edge into a max over a min | join a max below a min into an edge |
//! | c | inflate an edge into a split–merge bigon | collapse a doubled edge between forks |
//! | d | slide one upward fork past an adjacent one (self-inverse) | — |
//! | e | slide one downward fork past an adjacent one (self-inverse) | — |
//! | f | exchange a split below an adjacent merge | exchange a merge below an adjacent split |
//! | g | pinch two height-overlapping edges into a merge–split pair | remove such a pair, reconnecting straight or crossed |
//! | h | exchange two adjacent pass-throughs (self-inverse) | — |
//! | i | insert a pass-through pair on an edge | erase an adjacent pass-through pair |
//! | j | drop a pass-through below an adjacent split | raise it onto a chosen branch |
//! | k | drop a pass-through below an adjacent merge onto a chosen branch | raise it onto the trunk |
//!
//! "Split" is a fork with one edge down and two up (sign +1); "merge" the
//! mirror image (sign -1). A site ([`MoveSite`]) pins down every choice a
//! move admits, so applying a site is deterministic up to the heights chosen
//! for re-placed vertices; those are returned in [`Applied::fresh`] and can
//! be pinned explicitly for exact replay.

mod normalize;
mod rules;
mod trace;

pub use normalize::{canonical, normalize, NormalizeOutcome};
pub use rules::{move_rules, MoveRule};
pub use trace::{
    decode_trace, encode_trace, reparametrize, MoveTrace, ReparamError, ReplayError, TraceBuilder,
    TraceStep,
};

use crate::graph::{Extremum, ReebFunction, VertexId, VertexModel};
use crate::height::{fresh_between, Height};
use std::collections::BTreeSet;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum MoveKind {
    Birth,
    Cut,
    Bigon,
    SlideUp,
    SlideDown,
    Exchange,
    Pinch,
    PassSwap,
    PassPair,
    PassOverSplit,
    PassOverMerge,
}

impl MoveKind {
    pub const ALL: [MoveKind; 11] = [
        MoveKind::Birth,
        MoveKind::Cut,
        MoveKind::Bigon,
        MoveKind::SlideUp,
        MoveKind::SlideDown,
        MoveKind::Exchange,
        MoveKind::Pinch,
        MoveKind::PassSwap,
        MoveKind::PassPair,
        MoveKind::PassOverSplit,
        MoveKind::PassOverMerge,
    ];

    pub fn letter(self) -> char {
        match self {
            MoveKind::Birth => 'a',
            MoveKind::Cut => 'b',
            MoveKind::Bigon => 'c',
            MoveKind::SlideUp => 'd',
            MoveKind::SlideDown => 'e',
            MoveKind::Exchange => 'f',
            MoveKind::Pinch => 'g',
            MoveKind::PassSwap => 'h',
            MoveKind::PassPair => 'i',
            MoveKind::PassOverSplit => 'j',
            MoveKind::PassOverMerge => 'k',
        }
    }

    pub fn from_letter(c: char) -> Option<MoveKind> {
        MoveKind::ALL.into_iter().find(|k| k.letter() == c)
    }

    /// Self-inverse moves whose forward and backward site sets coincide.
    pub fn is_symmetric(self) -> bool {
        matches!(self, MoveKind::SlideUp | MoveKind::SlideDown | MoveKind::PassSwap)
    }
}

/// A fully-determined rewrite site. Vertex fields name the pattern in the
/// current graph; edges are given as (lower, upper) endpoint pairs.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, serde::Serialize, serde::Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum MoveSite {
    /// a-forward: create an isolated min–max edge. Fresh heights: [min, max].
    Birth,
    /// a-backward: delete the isolated edge (lower, upper).
    Death { lower: VertexId, upper: VertexId },
    /// b-forward: cut the edge, capping the lower part with a new max and the
    /// upper part with a new min. Fresh heights: [max, min] (max below min).
    Cut { lower: VertexId, upper: VertexId },
    /// b-backward: join a max strictly below a min into a single edge.
    Join { max: VertexId, min: VertexId },
    /// c-forward: replace the edge by split—(doubled edge)—merge.
    /// Fresh heights: [split, merge].
    BigonInsert { lower: VertexId, upper: VertexId },
    /// c-backward: collapse the doubled edge between a split and the merge
    /// above it back to a single edge.
    BigonCollapse { split: VertexId, merge: VertexId },
    /// d (self-inverse): two splits joined by an edge; `upper` descends onto
    /// the trunk, handing its up-branch toward `handed` to `lower`.  By
    /// default `lower` keeps its height, but it may be re-placed anywhere the
    /// final pattern allows. Fresh heights: [upper's new, lower's new].
    SlideUp { lower: VertexId, upper: VertexId, handed: VertexId },
    /// e (self-inverse): two merges joined by an edge; `lower` ascends onto
    /// the trunk, handing its down-branch toward `handed` to `upper`.  By
    /// default `upper` keeps its height, but it may be re-placed anywhere the
    /// final pattern allows. Fresh heights: [upper's new, lower's new].
    SlideDown { lower: VertexId, upper: VertexId, handed: VertexId },
    /// f-forward: a split below an adjacent merge (sharing one edge) trade
    /// places, the merge descending. Requires every lower boundary vertex of
    /// the pattern below every upper one. Fresh heights: [merge, split].
    Exchange { split: VertexId, merge: VertexId },
    /// f-backward: a merge below an adjacent split trade places, the split
    /// descending. `trunk_in` picks which down-neighbor feeds the split
    /// directly afterwards; `split_out` which up-neighbor it keeps.
    /// Fresh heights: [split, merge].
    ExchangeBack { merge: VertexId, split: VertexId, trunk_in: VertexId, split_out: VertexId },
    /// g-forward: pinch two distinct edges whose open height ranges overlap
    /// into a merge—split pair. Fresh heights: [merge, split].
    Pinch { first: (VertexId, VertexId), second: (VertexId, VertexId) },
    /// g-backward: delete a merge—split pair joined by a single edge,
    /// reconnecting the two loose ends below to the two above, either in
    /// height order (`crossed: false`) or swapped.
    Unpinch { merge: VertexId, split: VertexId, crossed: bool },
    /// h (self-inverse): two adjacent pass-throughs trade heights exactly.
    /// No fresh heights.
    PassSwap { lower: VertexId, upper: VertexId },
    /// i-forward: insert two pass-throughs on an edge.
    /// Fresh heights: [lower pass, upper pass].
    PassInsert { lower: VertexId, upper: VertexId },
    /// i-backward: erase two adjacent pass-throughs.
    PassErase { lower: VertexId, upper: VertexId },
    /// j-forward: a pass-through on an up-branch of a split descends onto the
    /// trunk. Fresh heights: [pass].
    PassDescendSplit { split: VertexId, pass: VertexId },
    /// j-backward: a pass-through on the trunk of a split ascends onto the
    /// branch toward `branch`. Fresh heights: [pass].
    PassAscendSplit { split: VertexId, pass: VertexId, branch: VertexId },
    /// k-forward: a pass-through on the up-trunk of a merge descends onto the
    /// down-branch toward `branch`. Fresh heights: [pass].
    PassDescendMerge { merge: VertexId, pass: VertexId, branch: VertexId },
    /// k-backward: a pass-through on a down-branch of a merge ascends onto
    /// the trunk. Fresh heights: [pass].
    PassAscendMerge { merge: VertexId, pass: VertexId },
}

impl MoveSite {
    pub fn kind(&self) -> MoveKind {
        match self {
            MoveSite::Birth | MoveSite::Death { .. } => MoveKind::Birth,
            MoveSite::Cut { .. } | MoveSite::Join { .. } => MoveKind::Cut,
            MoveSite::BigonInsert { .. } | MoveSite::BigonCollapse { .. } => MoveKind::Bigon,
            MoveSite::SlideUp { .. } => MoveKind::SlideUp,
            MoveSite::SlideDown { .. } => MoveKind::SlideDown,
            MoveSite::Exchange { .. } | MoveSite::ExchangeBack { .. } => MoveKind::Exchange,
            MoveSite::Pinch { .. } | MoveSite::Unpinch { .. } => MoveKind::Pinch,
            MoveSite::PassSwap { .. } => MoveKind::PassSwap,
            MoveSite::PassInsert { .. } | MoveSite::PassErase { .. } => MoveKind::PassPair,
            MoveSite::PassDescendSplit { .. } | MoveSite::PassAscendSplit { .. } => MoveKind::PassOverSplit,
            MoveSite::PassDescendMerge { .. } | MoveSite::PassAscendMerge { .. } => MoveKind::PassOverMerge,
        }
    }

    pub fn direction(&self) -> Direction {
        match self {
            MoveSite::Birth
            | MoveSite::Cut { .. }
            | MoveSite::BigonInsert { .. }
            | MoveSite::SlideUp { .. }
            | MoveSite::SlideDown { .. }
            | MoveSite::Exchange { .. }
            | MoveSite::Pinch { .. }
            | MoveSite::PassSwap { .. }
            | MoveSite::PassInsert { .. }
            | MoveSite::PassDescendSplit { .. }
            | MoveSite::PassDescendMerge { .. } => Direction::Forward,
            _ => Direction::Backward,
        }
    }

    /// Number of fresh heights the move takes.
    pub fn fresh_len(&self) -> usize {
        match self {
            MoveSite::Birth
            | MoveSite::Cut { .. }
            | MoveSite::BigonInsert { .. }
            | MoveSite::SlideUp { .. }
            | MoveSite::SlideDown { .. }
            | MoveSite::Exchange { .. }
            | MoveSite::ExchangeBack { .. }
            | MoveSite::Pinch { .. }
            | MoveSite::PassInsert { .. } => 2,
            MoveSite::PassDescendSplit { .. }
            | MoveSite::PassAscendSplit { .. }
            | MoveSite::PassDescendMerge { .. }
            | MoveSite::PassAscendMerge { .. } => 1,
            _ => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MoveError {
    #[error("stale site: {0}")]
    StaleSite(String),
    #[error("expected {expected} fresh heights, got {got}")]
    FreshHeightCount { expected: usize, got: usize },
    #[error("fresh height constraint violated: {0}")]
    FreshHeightOrder(String),
}

/// Result of applying a move.
#[derive(Clone, Debug)]
pub struct Applied {
    pub graph: ReebFunction,
    /// Heights assigned to re-placed or new vertices, in documented order.
    pub fresh: Vec<Height>,
    /// Newly created vertices, in the same order as their `fresh` entries
    /// (empty for moves that only re-place existing vertices).
    pub new_vertices: Vec<VertexId>,
}

fn stale(msg: impl Into<String>) -> MoveError {
    MoveError::StaleSite(msg.into())
}

/// `v`'s up-neighbors with one occurrence of `w` removed.
fn ups_minus_one(g: &ReebFunction, v: VertexId, w: VertexId) -> Vec<VertexId> {
    let mut ups = g.up_neighbors(v);
    if let Some(i) = ups.iter().position(|&x| x == w) {
        ups.remove(i);
    }
    ups
}

fn downs_minus_one(g: &ReebFunction, v: VertexId, w: VertexId) -> Vec<VertexId> {
    let mut downs = g.down_neighbors(v);
    if let Some(i) = downs.iter().position(|&x| x == w) {
        downs.remove(i);
    }
    downs
}

fn multiplicity(g: &ReebFunction, a: VertexId, b: VertexId) -> usize {
    g.edges().iter().filter(|&&(x, y)| (x == a && y == b) || (x == b && y == a)).count()
}

fn require_model(g: &ReebFunction, v: VertexId, want: VertexModel, role: &str) -> Result<(), MoveError> {
    if !g.contains_vertex(v) {
        return Err(stale(format!("{role} {v} is not in the graph")));
    }
    match g.classify(v) {
        Some(m) if m == want => Ok(()),
        m => Err(stale(format!("{role} {v} is {m:?}, expected {want:?}"))),
    }
}

fn require_edge(g: &ReebFunction, a: VertexId, b: VertexId) -> Result<(), MoveError> {
    for v in [a, b] {
        if !g.contains_vertex(v) {
            return Err(stale(format!("vertex {v} is not in the graph")));
        }
    }
    if multiplicity(g, a, b) == 0 {
        return Err(stale(format!("no edge between {a} and {b}")));
    }
    Ok(())
}

/// Applies `site` with deterministic default heights for re-placed vertices.
pub fn apply(g: &ReebFunction, site: &MoveSite) -> Result<Applied, MoveError> {
    apply_inner(g, site, None)
}

/// Applies `site` with explicitly pinned fresh heights (exact replay).
pub fn apply_with_heights(g: &ReebFunction, site: &MoveSite, fresh: &[Height]) -> Result<Applied, MoveError> {
    apply_inner(g, site, Some(fresh))
}

/// Heights of every vertex except the ones this move is about to re-place.
/// A re-placed vertex vacates its old height, so that height is fair game
/// for the fresh list.
fn occupied_outside(g: &ReebFunction, vacated: &[VertexId]) -> Vec<Height> {
    g.vertex_ids()
        .filter(|v| !vacated.contains(v))
        .map(|v| g.height(v).clone())
        .collect()
}

/// Checks an explicit fresh list: `fresh[i]` must lie strictly inside
/// `tight[i]`, the whole list must strictly ascend, and no entry may collide
/// with the height of a vertex that is staying put.
fn validate_fresh(
    g: &ReebFunction,
    fresh: &[Height],
    tight: &[(Height, Height)],
    vacated: &[VertexId],
) -> Result<(), MoveError> {
    if fresh.len() != tight.len() {
        return Err(MoveError::FreshHeightCount { expected: tight.len(), got: fresh.len() });
    }
    let occupied = occupied_outside(g, vacated);
    for (i, (f, (lo, hi))) in fresh.iter().zip(tight).enumerate() {
        if !(f > lo && f < hi) {
            return Err(MoveError::FreshHeightOrder(format!(
                "fresh height #{i} = {f} must lie strictly between {lo} and {hi}"
            )));
        }
        if occupied.contains(f) {
            return Err(MoveError::FreshHeightOrder(format!(
                "fresh height #{i} = {f} collides with an existing vertex height"
            )));
        }
    }
    for w in fresh.windows(2) {
        if w[0] >= w[1] {
            return Err(MoveError::FreshHeightOrder(format!(
                "fresh heights must be strictly increasing, got {} then {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// Resolves the fresh list for a move whose heights all validate against the
/// same open interval; defaults cascade upward inside that interval.
fn take_fresh(
    g: &ReebFunction,
    explicit: Option<&[Height]>,
    bounds: &[(Height, Height)],
    vacated: &[VertexId],
) -> Result<Vec<Height>, MoveError> {
    let default_box = bounds[0].clone();
    take_fresh_tight(g, explicit, bounds, vacated, &default_box)
}

/// Resolves the fresh list for a move with per-height validation intervals.
/// Explicit heights are checked against the (possibly wider) `tight`
/// intervals; defaults cascade upward inside `default_box`, which must be
/// contained in every tight interval.
fn take_fresh_tight(
    g: &ReebFunction,
    explicit: Option<&[Height]>,
    tight: &[(Height, Height)],
    vacated: &[VertexId],
    default_box: &(Height, Height),
) -> Result<Vec<Height>, MoveError> {
    match explicit {
        Some(fs) => {
            validate_fresh(g, fs, tight, vacated)?;
            Ok(fs.to_vec())
        }
        None => {
            let occupied = occupied_outside(g, vacated);
            let (lo, hi) = default_box;
            let mut out = Vec::with_capacity(tight.len());
            let mut lower = lo.clone();
            for _ in 0..tight.len() {
                let f = fresh_between(&lower, hi, &occupied);
                lower = f.clone();
                out.push(f);
            }
            Ok(out)
        }
    }
}

/// Resolves the fresh list for a move that supplies its own default heights
/// (already valid by construction).
fn take_fresh_or(
    g: &ReebFunction,
    explicit: Option<&[Height]>,
    tight: &[(Height, Height)],
    vacated: &[VertexId],
    defaults: Vec<Height>,
) -> Result<Vec<Height>, MoveError> {
    match explicit {
        Some(fs) => {
            validate_fresh(g, fs, tight, vacated)?;
            Ok(fs.to_vec())
        }
        None => Ok(defaults),
    }
}

fn apply_inner(g: &ReebFunction, site: &MoveSite, explicit: Option<&[Height]>) -> Result<Applied, MoveError> {
    match *site {
        MoveSite::Birth => {
            let base = g
                .vertex_ids()
                .map(|v| g.height(v).clone())
                .max()
                .unwrap_or_else(|| Height::from_int(-1));
            let default = [base.shifted_by_int(1), base.shifted_by_int(2)];
            let fresh = match explicit {
                Some(fs) => {
                    if fs.len() != 2 {
                        return Err(MoveError::FreshHeightCount { expected: 2, got: fs.len() });
                    }
                    if fs[0] >= fs[1] {
                        return Err(MoveError::FreshHeightOrder(format!(
                            "birth needs ascending heights, got {} then {}",
                            fs[0], fs[1]
                        )));
                    }
                    for f in fs {
                        if g.vertex_ids().any(|v| g.height(v) == f) {
                            return Err(MoveError::FreshHeightOrder(format!(
                                "fresh height {f} collides with an existing vertex height"
                            )));
                        }
                    }
                    fs.to_vec()
                }
                None => default.to_vec(),
            };
            let mut out = g.clone();
            let lo = out.add_vertex(fresh[0].clone());
            let hi = out.add_vertex(fresh[1].clone());
            out.add_edge(lo, hi);
            Ok(Applied { graph: out, fresh, new_vertices: vec![lo, hi] })
        }

        MoveSite::Death { lower, upper } => {
            require_edge(g, lower, upper)?;
            for (v, role) in [(lower, "lower"), (upper, "upper")] {
                if g.degree(v) != 1 {
                    return Err(stale(format!("{role} {v} has degree {}, expected 1", g.degree(v))));
                }
            }
            if g.height(lower) >= g.height(upper) {
                return Err(stale(format!("{lower} is not below {upper}")));
            }
            let mut out = g.clone();
            out.remove_vertex(lower);
            out.remove_vertex(upper);
            Ok(Applied { graph: out, fresh: vec![], new_vertices: vec![] })
        }

        MoveSite::Cut { lower, upper } => {
            require_edge(g, lower, upper)?;
            if g.height(lower) >= g.height(upper) {
                return Err(stale(format!("{lower} is not below {upper}")));
            }
            let (lo, hi) = (g.height(lower).clone(), g.height(upper).clone());
            let bounds = [(lo.clone(), hi.clone()), (lo, hi)];
            let fresh = take_fresh(g, explicit, &bounds, &[])?;
            let mut out = g.clone();
            out.remove_edge(lower, upper);
            let cap = out.add_vertex(fresh[0].clone());
            let cup = out.add_vertex(fresh[1].clone());
            out.add_edge(lower, cap);
            out.add_edge(cup, upper);
            Ok(Applied { graph: out, fresh, new_vertices: vec![cap, cup] })
        }

        MoveSite::Join { max, min } => {
            require_model(g, max, VertexModel::Extremum(Extremum::Max), "max")?;
            require_model(g, min, VertexModel::Extremum(Extremum::Min), "min")?;
            if g.height(max) >= g.height(min) {
                return Err(stale(format!("max {max} must lie strictly below min {min}")));
            }
            let u = g.down_neighbors(max)[0];
            let v = g.up_neighbors(min)[0];
            let mut out = g.clone();
            out.remove_vertex(max);
            out.remove_vertex(min);
            out.add_edge(u, v);
            Ok(Applied { graph: out, fresh: vec![], new_vertices: vec![] })
        }

        MoveSite::BigonInsert { lower, upper } => {
            require_edge(g, lower, upper)?;
            if g.height(lower) >= g.height(upper) {
                return Err(stale(format!("{lower} is not below {upper}")));
            }
            let (lo, hi) = (g.height(lower).clone(), g.height(upper).clone());
            let bounds = [(lo.clone(), hi.clone()), (lo, hi)];
            let fresh = take_fresh(g, explicit, &bounds, &[])?;
            let mut out = g.clone();
            out.remove_edge(lower, upper);
            let split = out.add_vertex(fresh[0].clone());
            let merge = out.add_vertex(fresh[1].clone());
            out.add_edge(lower, split);
            out.add_edge(split, merge);
            out.add_edge(split, merge);
            out.add_edge(merge, upper);
            Ok(Applied { graph: out, fresh, new_vertices: vec![split, merge] })
        }

        MoveSite::BigonCollapse { split, merge } => {
            require_model(g, split, VertexModel::Fork(1), "split")?;
            require_model(g, merge, VertexModel::Fork(-1), "merge")?;
            if multiplicity(g, split, merge) != 2 {
                return Err(stale(format!("{split} and {merge} are not joined by a doubled edge")));
            }
            if g.height(split) >= g.height(merge) {
                return Err(stale(format!("split {split} is not below merge {merge}")));
            }
            let u = g.down_neighbors(split)[0];
            let v = g.up_neighbors(merge)[0];
            let mut out = g.clone();
            out.remove_vertex(split);
            out.remove_vertex(merge);
            out.add_edge(u, v);
            Ok(Applied { graph: out, fresh: vec![], new_vertices: vec![] })
        }

        MoveSite::SlideUp { lower, upper, handed } => {
            require_model(g, lower, VertexModel::Fork(1), "lower split")?;
            require_model(g, upper, VertexModel::Fork(1), "upper split")?;
            require_edge(g, lower, upper)?;
            if g.height(lower) >= g.height(upper) {
                return Err(stale(format!("{lower} is not below {upper}")));
            }
            if !g.up_neighbors(upper).contains(&handed) {
                return Err(stale(format!("{handed} is not an up-neighbor of {upper}")));
            }
            let trunk = g.down_neighbors(lower)[0];
            let kept = ups_minus_one(g, upper, handed)[0];
            let own = ups_minus_one(g, lower, upper)[0];
            // Afterwards: trunk -> upper -> {kept, lower}, lower -> {own, handed}.
            let tight = [
                (g.height(trunk).clone(), g.height(kept).clone()),
                (g.height(trunk).clone(), g.height(own).min(g.height(handed)).clone()),
            ];
            let vacated = [upper, lower];
            let defaults = {
                let occupied = occupied_outside(g, &vacated);
                let below = fresh_between(g.height(trunk), g.height(lower), &occupied);
                vec![below, g.height(lower).clone()]
            };
            let fresh = take_fresh_or(g, explicit, &tight, &vacated, defaults)?;
            let mut out = g.clone();
            out.remove_edge(trunk, lower);
            out.remove_edge(upper, handed);
            out.add_edge(trunk, upper);
            out.add_edge(lower, handed);
            out.set_height(upper, fresh[0].clone());
            out.set_height(lower, fresh[1].clone());
            Ok(Applied { graph: out, fresh, new_vertices: vec![] })
        }

        MoveSite::SlideDown { lower, upper, handed } => {
            require_model(g, lower, VertexModel::Fork(-1), "lower merge")?;
            require_model(g, upper, VertexModel::Fork(-1), "upper merge")?;
            require_edge(g, lower, upper)?;
            if g.height(lower) >= g.height(upper) {
                return Err(stale(format!("{lower} is not below {upper}")));
            }
            if !g.down_neighbors(lower).contains(&handed) {
                return Err(stale(format!("{handed} is not a down-neighbor of {lower}")));
            }
            let trunk = g.up_neighbors(upper)[0];
            let kept = downs_minus_one(g, upper, lower)[0];
            let own = downs_minus_one(g, lower, handed)[0];
            // Afterwards: {kept, handed} -> upper -> lower -> trunk, with
            // lower keeping its branch toward `own`.
            let tight = [
                (g.height(kept).max(g.height(handed)).clone(), g.height(trunk).clone()),
                (g.height(own).clone(), g.height(trunk).clone()),
            ];
            let vacated = [upper, lower];
            let defaults = {
                let occupied = occupied_outside(g, &vacated);
                let above = fresh_between(g.height(upper), g.height(trunk), &occupied);
                vec![g.height(upper).clone(), above]
            };
            let fresh = take_fresh_or(g, explicit, &tight, &vacated, defaults)?;
            let mut out = g.clone();
            out.remove_edge(upper, trunk);
            out.remove_edge(handed, lower);
            out.add_edge(lower, trunk);
            out.add_edge(handed, upper);
            out.set_height(upper, fresh[0].clone());
            out.set_height(lower, fresh[1].clone());
            Ok(Applied { graph: out, fresh, new_vertices: vec![] })
        }

        MoveSite::Exchange { split, merge } => {
            require_model(g, split, VertexModel::Fork(1), "split")?;
            require_model(g, merge, VertexModel::Fork(-1), "merge")?;
            if multiplicity(g, split, merge) != 1 {
                return Err(stale(format!("{split} and {merge} must share exactly one edge")));
            }
            if g.height(split) >= g.height(merge) {
                return Err(stale(format!("split {split} is not below merge {merge}")));
            }
            let a = g.down_neighbors(split)[0];
            let c = ups_minus_one(g, split, merge)[0];
            let b = downs_minus_one(g, merge, split)[0];
            let d = g.up_neighbors(merge)[0];
            let lo = g.height(a).max(g.height(b)).clone();
            let hi = g.height(c).min(g.height(d)).clone();
            if lo >= hi {
                return Err(stale(format!(
                    "exchange blocked: boundary below reaches {lo}, boundary above starts at {hi}"
                )));
            }
            let bounds = [(lo.clone(), hi.clone()), (lo, hi)];
            let fresh = take_fresh(g, explicit, &bounds, &[split, merge])?;
            let mut out = g.clone();
            out.remove_edge(a, split);
            out.remove_edge(merge, d);
            out.add_edge(a, merge);
            out.add_edge(split, d);
            out.set_height(merge, fresh[0].clone());
            out.set_height(split, fresh[1].clone());
            Ok(Applied { graph: out, fresh, new_vertices: vec![] })
        }

        MoveSite::ExchangeBack { merge, split, trunk_in, split_out } => {
            require_model(g, merge, VertexModel::Fork(-1), "merge")?;
            require_model(g, split, VertexModel::Fork(1), "split")?;
            if multiplicity(g, merge, split) != 1 {
                return Err(stale(format!("{merge} and {split} must share exactly one edge")));
            }
            if g.height(merge) >= g.height(split) {
                return Err(stale(format!("merge {merge} is not below split {split}")));
            }
            let downs = g.down_neighbors(merge);
            let ups = g.up_neighbors(split);
            if !downs.contains(&trunk_in) {
                return Err(stale(format!("{trunk_in} is not a down-neighbor of {merge}")));
            }
            if !ups.contains(&split_out) {
                return Err(stale(format!("{split_out} is not an up-neighbor of {split}")));
            }
            let other_in = if downs[0] == trunk_in { downs[1] } else { downs[0] };
            let other_out = if ups[0] == split_out { ups[1] } else { ups[0] };
            // Afterwards: trunk_in -> split -> {split_out, merge} and
            // {split, other_in} -> merge -> other_out.  The split only has to
            // clear its own trunk and stay under its own outputs, so the
            // validation intervals are per-vertex; defaults go in the band
            // between all inputs and all outputs, which always exists here.
            let lo = g.height(downs[0]).max(g.height(downs[1])).clone();
            let hi = g.height(ups[0]).min(g.height(ups[1])).clone();
            debug_assert!(lo < hi, "pattern validity implies all ins below all outs");
            let tight = [
                (g.height(trunk_in).clone(), g.height(split_out).clone()),
                (g.height(other_in).clone(), g.height(other_out).clone()),
            ];
            let fresh = take_fresh_tight(g, explicit, &tight, &[split, merge], &(lo, hi))?;
            let mut out = g.clone();
            out.remove_edge(trunk_in, merge);
            out.remove_edge(split, other_out);
            out.add_edge(trunk_in, split);
            out.add_edge(merge, other_out);
            out.set_height(split, fresh[0].clone());
            out.set_height(merge, fresh[1].clone());
            Ok(Applied { graph: out, fresh, new_vertices: vec![] })
        }

        MoveSite::Pinch { first, second } => {
            let (u1, v1) = first;
            let (u2, v2) = second;
            let same_pair = first == second;
            let need = if same_pair { 2 } else { 1 };
            for (u, v) in [first, second] {
                require_edge(g, u, v)?;
                if g.height(u) >= g.height(v) {
                    return Err(stale(format!("{u} is not below {v}")));
                }
            }
            if multiplicity(g, u1, v1) < need {
                return Err(stale("pinching an edge with itself needs a doubled edge"));
            }
            let lo = g.height(u1).max(g.height(u2)).clone();
            let hi = g.height(v1).min(g.height(v2)).clone();
            if lo >= hi {
                return Err(stale(format!(
                    "edges do not overlap in height: lower ends reach {lo}, upper ends start at {hi}"
                )));
            }
            let bounds = [(lo.clone(), hi.clone()), (lo, hi)];
            let fresh = take_fresh(g, explicit, &bounds, &[])?;
            let mut out = g.clone();
            out.remove_edge(u1, v1);
            out.remove_edge(u2, v2);
            let merge = out.add_vertex(fresh[0].clone());
            let split = out.add_vertex(fresh[1].clone());
            out.add_edge(u1, merge);
            out.add_edge(u2, merge);
            out.add_edge(merge, split);
            out.add_edge(split, v1);
            out.add_edge(split, v2);
            Ok(Applied { graph: out, fresh, new_vertices: vec![merge, split] })
        }

        MoveSite::Unpinch { merge, split, crossed } => {
            require_model(g, merge, VertexModel::Fork(-1), "merge")?;
            require_model(g, split, VertexModel::Fork(1), "split")?;
            if multiplicity(g, merge, split) != 1 {
                return Err(stale(format!("{merge} and {split} must share exactly one edge")));
            }
            if g.height(merge) >= g.height(split) {
                return Err(stale(format!("merge {merge} is not below split {split}")));
            }
            let mut us = g.down_neighbors(merge);
            us.sort_by(|a, b| (g.height(*a), *a).cmp(&(g.height(*b), *b)));
            let mut vs = g.up_neighbors(split);
            vs.sort_by(|a, b| (g.height(*a), *a).cmp(&(g.height(*b), *b)));
            if crossed && (us[0] == us[1] || vs[0] == vs[1]) {
                return Err(stale("crossed reconnection is redundant when loose ends coincide"));
            }
            let mut out = g.clone();
            out.remove_vertex(merge);
            out.remove_vertex(split);
            if crossed {
                out.add_edge(us[0], vs[1]);
                out.add_edge(us[1], vs[0]);
            } else {
                out.add_edge(us[0], vs[0]);
                out.add_edge(us[1], vs[1]);
            }
            Ok(Applied { graph: out, fresh: vec![], new_vertices: vec![] })
        }

        MoveSite::PassSwap { lower, upper } => {
            require_model(g, lower, VertexModel::PassThrough, "lower")?;
            require_model(g, upper, VertexModel::PassThrough, "upper")?;
            require_edge(g, lower, upper)?;
            if g.height(lower) >= g.height(upper) {
                return Err(stale(format!("{lower} is not below {upper}")));
            }
            let u = g.down_neighbors(lower)[0];
            let v = g.up_neighbors(upper)[0];
            let (h_lo, h_hi) = (g.height(lower).clone(), g.height(upper).clone());
            let mut out = g.clone();
            out.remove_edge(u, lower);
            out.remove_edge(upper, v);
            out.add_edge(u, upper);
            out.add_edge(lower, v);
            out.set_height(lower, h_hi);
            out.set_height(upper, h_lo);
            Ok(Applied { graph: out, fresh: vec![], new_vertices: vec![] })
        }

        MoveSite::PassInsert { lower, upper } => {
            require_edge(g, lower, upper)?;
            if g.height(lower) >= g.height(upper) {
                return Err(stale(format!("{lower} is not below {upper}")));
            }
            let (lo, hi) = (g.height(lower).clone(), g.height(upper).clone());
            let bounds = [(lo.clone(), hi.clone()), (lo, hi)];
            let fresh = take_fresh(g, explicit, &bounds, &[])?;
            let mut out = g.clone();
            out.remove_edge(lower, upper);
            let p1 = out.add_vertex(fresh[0].clone());
            let p2 = out.add_vertex(fresh[1].clone());
            out.add_edge(lower, p1);
            out.add_edge(p1, p2);
            out.add_edge(p2, upper);
            Ok(Applied { graph: out, fresh, new_vertices: vec![p1, p2] })
        }

        MoveSite::PassErase { lower, upper } => {
            require_model(g, lower, VertexModel::PassThrough, "lower")?;
            require_model(g, upper, VertexModel::PassThrough, "upper")?;
            require_edge(g, lower, upper)?;
            if g.height(lower) >= g.height(upper) {
                return Err(stale(format!("{lower} is not below {upper}")));
            }
            let u = g.down_neighbors(lower)[0];
            let v = g.up_neighbors(upper)[0];
            let mut out = g.clone();
            out.remove_vertex(lower);
            out.remove_vertex(upper);
            out.add_edge(u, v);
            Ok(Applied { graph: out, fresh: vec![], new_vertices: vec![] })
        }

        MoveSite::PassDescendSplit { split, pass } => {
            require_model(g, split, VertexModel::Fork(1), "split")?;
            require_model(g, pass, VertexModel::PassThrough, "pass")?;
            require_edge(g, split, pass)?;
            if g.height(split) >= g.height(pass) {
                return Err(stale(format!("pass {pass} must sit above split {split} on a branch")));
            }
            let trunk = g.down_neighbors(split)[0];
            let w = g.up_neighbors(pass)[0];
            let bounds = [(g.height(trunk).clone(), g.height(split).clone())];
            let fresh = take_fresh(g, explicit, &bounds, &[pass])?;
            let mut out = g.clone();
            out.remove_edge(trunk, split);
            out.remove_edge(pass, w);
            out.add_edge(trunk, pass);
            out.add_edge(split, w);
            out.set_height(pass, fresh[0].clone());
            Ok(Applied { graph: out, fresh, new_vertices: vec![] })
        }

        MoveSite::PassAscendSplit { split, pass, branch } => {
            require_model(g, split, VertexModel::Fork(1), "split")?;
            require_model(g, pass, VertexModel::PassThrough, "pass")?;
            require_edge(g, pass, split)?;
            if g.height(pass) >= g.height(split) {
                return Err(stale(format!("pass {pass} must sit below split {split} on the trunk")));
            }
            if !g.up_neighbors(split).contains(&branch) {
                return Err(stale(format!("{branch} is not an up-neighbor of {split}")));
            }
            let u = g.down_neighbors(pass)[0];
            let bounds = [(g.height(split).clone(), g.height(branch).clone())];
            let fresh = take_fresh(g, explicit, &bounds, &[pass])?;
            let mut out = g.clone();
            out.remove_edge(u, pass);
            out.remove_edge(split, branch);
            out.add_edge(u, split);
            out.add_edge(pass, branch);
            out.set_height(pass, fresh[0].clone());
            Ok(Applied { graph: out, fresh, new_vertices: vec![] })
        }

        MoveSite::PassDescendMerge { merge, pass, branch } => {
            require_model(g, merge, VertexModel::Fork(-1), "merge")?;
            require_model(g, pass, VertexModel::PassThrough, "pass")?;
            require_edge(g, merge, pass)?;
            if g.height(merge) >= g.height(pass) {
                return Err(stale(format!("pass {pass} must sit above merge {merge} on the trunk")));
            }
            if !g.down_neighbors(merge).contains(&branch) {
                return Err(stale(format!("{branch} is not a down-neighbor of {merge}")));
            }
            let v = g.up_neighbors(pass)[0];
            let bounds = [(g.height(branch).clone(), g.height(merge).clone())];
            let fresh = take_fresh(g, explicit, &bounds, &[pass])?;
            let mut out = g.clone();
            out.remove_edge(branch, merge);
            out.remove_edge(pass, v);
            out.add_edge(branch, pass);
            out.add_edge(merge, v);
            out.set_height(pass, fresh[0].clone());
            Ok(Applied { graph: out, fresh, new_vertices: vec![] })
        }

        MoveSite::PassAscendMerge { merge, pass } => {
            require_model(g, merge, VertexModel::Fork(-1), "merge")?;
            require_model(g, pass, VertexModel::PassThrough, "pass")?;
            require_edge(g, pass, merge)?;
            if g.height(pass) >= g.height(merge) {
                return Err(stale(format!("pass {pass} must sit below merge {merge} on a branch")));
            }
            let u = g.down_neighbors(pass)[0];
            let v = g.up_neighbors(merge)[0];
            let bounds = [(g.height(merge).clone(), g.height(v).clone())];
            let fresh = take_fresh(g, explicit, &bounds, &[pass])?;
            let mut out = g.clone();
            out.remove_edge(u, pass);
            out.remove_edge(merge, v);
            out.add_edge(u, merge);
            out.add_edge(pass, v);
            out.set_height(pass, fresh[0].clone());
            Ok(Applied { graph: out, fresh, new_vertices: vec![] })
        }
    }
}

/// All distinct sites of one move kind and direction. For self-inverse kinds
/// both directions return the same list.
pub fn enumerate_sites(g: &ReebFunction, kind: MoveKind, direction: Direction) -> Vec<MoveSite> {
    let mut sites: Vec<MoveSite> = Vec::new();
    let distinct_edges = || -> Vec<(VertexId, VertexId)> {
        let set: BTreeSet<(VertexId, VertexId)> = g.edges().iter().copied().collect();
        set.into_iter().collect()
    };
    match (kind, direction) {
        (MoveKind::Birth, Direction::Forward) => sites.push(MoveSite::Birth),
        (MoveKind::Birth, Direction::Backward) => {
            for (a, b) in distinct_edges() {
                if g.degree(a) == 1 && g.degree(b) == 1 {
                    sites.push(MoveSite::Death { lower: a, upper: b });
                }
            }
        }
        (MoveKind::Cut, Direction::Forward) => {
            for (a, b) in distinct_edges() {
                sites.push(MoveSite::Cut { lower: a, upper: b });
            }
        }
        (MoveKind::Cut, Direction::Backward) => {
            let maxes: Vec<VertexId> = g
                .vertex_ids()
                .filter(|&v| g.classify(v) == Some(VertexModel::Extremum(Extremum::Max)))
                .collect();
            let mins: Vec<VertexId> = g
                .vertex_ids()
                .filter(|&v| g.classify(v) == Some(VertexModel::Extremum(Extremum::Min)))
                .collect();
            for &mx in &maxes {
                for &mn in &mins {
                    if g.height(mx) < g.height(mn) {
                        sites.push(MoveSite::Join { max: mx, min: mn });
                    }
                }
            }
        }
        (MoveKind::Bigon, Direction::Forward) => {
            for (a, b) in distinct_edges() {
                sites.push(MoveSite::BigonInsert { lower: a, upper: b });
            }
        }
        (MoveKind::Bigon, Direction::Backward) => {
            for (a, b) in distinct_edges() {
                if multiplicity(g, a, b) == 2
                    && g.classify(a) == Some(VertexModel::Fork(1))
                    && g.classify(b) == Some(VertexModel::Fork(-1))
                {
                    sites.push(MoveSite::BigonCollapse { split: a, merge: b });
                }
            }
        }
        (MoveKind::SlideUp, _) => {
            for (a, b) in distinct_edges() {
                if g.classify(a) == Some(VertexModel::Fork(1)) && g.classify(b) == Some(VertexModel::Fork(1)) {
                    let mut handed: Vec<VertexId> = g.up_neighbors(b);
                    handed.sort();
                    handed.dedup();
                    for w in handed {
                        sites.push(MoveSite::SlideUp { lower: a, upper: b, handed: w });
                    }
                }
            }
        }
        (MoveKind::SlideDown, _) => {
            for (a, b) in distinct_edges() {
                if g.classify(a) == Some(VertexModel::Fork(-1)) && g.classify(b) == Some(VertexModel::Fork(-1)) {
                    let mut handed: Vec<VertexId> = g.down_neighbors(a);
                    handed.sort();
                    handed.dedup();
                    for w in handed {
                        sites.push(MoveSite::SlideDown { lower: a, upper: b, handed: w });
                    }
                }
            }
        }
        (MoveKind::Exchange, Direction::Forward) => {
            for (a, b) in distinct_edges() {
                if g.classify(a) == Some(VertexModel::Fork(1))
                    && g.classify(b) == Some(VertexModel::Fork(-1))
                    && multiplicity(g, a, b) == 1
                {
                    let below_max = g.height(g.down_neighbors(a)[0]).max(g.height(downs_minus_one(g, b, a)[0]));
                    let above_min = g.height(ups_minus_one(g, a, b)[0]).min(g.height(g.up_neighbors(b)[0]));
                    if below_max < above_min {
                        sites.push(MoveSite::Exchange { split: a, merge: b });
                    }
                }
            }
        }
        (MoveKind::Exchange, Direction::Backward) => {
            for (a, b) in distinct_edges() {
                if g.classify(a) == Some(VertexModel::Fork(-1))
                    && g.classify(b) == Some(VertexModel::Fork(1))
                    && multiplicity(g, a, b) == 1
                {
                    let mut ins = g.down_neighbors(a);
                    ins.sort();
                    ins.dedup();
                    let mut outs = g.up_neighbors(b);
                    outs.sort();
                    outs.dedup();
                    for &t in &ins {
                        for &o in &outs {
                            sites.push(MoveSite::ExchangeBack { merge: a, split: b, trunk_in: t, split_out: o });
                        }
                    }
                }
            }
        }
        (MoveKind::Pinch, Direction::Forward) => {
            let edges = g.edges();
            let mut seen = BTreeSet::new();
            for i in 0..edges.len() {
                for j in (i + 1)..edges.len() {
                    let (e1, e2) = (edges[i].min(edges[j]), edges[i].max(edges[j]));
                    let lo = g.height(e1.0).max(g.height(e2.0));
                    let hi = g.height(e1.1).min(g.height(e2.1));
                    if lo < hi && seen.insert((e1, e2)) {
                        sites.push(MoveSite::Pinch { first: e1, second: e2 });
                    }
                }
            }
        }
        (MoveKind::Pinch, Direction::Backward) => {
            for (a, b) in distinct_edges() {
                if g.classify(a) == Some(VertexModel::Fork(-1))
                    && g.classify(b) == Some(VertexModel::Fork(1))
                    && multiplicity(g, a, b) == 1
                {
                    sites.push(MoveSite::Unpinch { merge: a, split: b, crossed: false });
                    let us = g.down_neighbors(a);
                    let vs = g.up_neighbors(b);
                    if us[0] != us[1] && vs[0] != vs[1] {
                        sites.push(MoveSite::Unpinch { merge: a, split: b, crossed: true });
                    }
                }
            }
        }
        (MoveKind::PassSwap, _) => {
            for (a, b) in distinct_edges() {
                if g.classify(a) == Some(VertexModel::PassThrough)
                    && g.classify(b) == Some(VertexModel::PassThrough)
                {
                    sites.push(MoveSite::PassSwap { lower: a, upper: b });
                }
            }
        }
        (MoveKind::PassPair, Direction::Forward) => {
            for (a, b) in distinct_edges() {
                sites.push(MoveSite::PassInsert { lower: a, upper: b });
            }
        }
        (MoveKind::PassPair, Direction::Backward) => {
            for (a, b) in distinct_edges() {
                if g.classify(a) == Some(VertexModel::PassThrough)
                    && g.classify(b) == Some(VertexModel::PassThrough)
                {
                    sites.push(MoveSite::PassErase { lower: a, upper: b });
                }
            }
        }
        (MoveKind::PassOverSplit, Direction::Forward) => {
            for (a, b) in distinct_edges() {
                if g.classify(a) == Some(VertexModel::Fork(1)) && g.classify(b) == Some(VertexModel::PassThrough) {
                    sites.push(MoveSite::PassDescendSplit { split: a, pass: b });
                }
            }
        }
        (MoveKind::PassOverSplit, Direction::Backward) => {
            for (a, b) in distinct_edges() {
                if g.classify(a) == Some(VertexModel::PassThrough) && g.classify(b) == Some(VertexModel::Fork(1)) {
                    let mut branches = g.up_neighbors(b);
                    branches.sort();
                    branches.dedup();
                    for w in branches {
                        sites.push(MoveSite::PassAscendSplit { split: b, pass: a, branch: w });
                    }
                }
            }
        }
        (MoveKind::PassOverMerge, Direction::Forward) => {
            for (a, b) in distinct_edges() {
                if g.classify(a) == Some(VertexModel::Fork(-1)) && g.classify(b) == Some(VertexModel::PassThrough) {
                    let mut branches = g.down_neighbors(a);
                    branches.sort();
                    branches.dedup();
                    for w in branches {
                        sites.push(MoveSite::PassDescendMerge { merge: a, pass: b, branch: w });
                    }
                }
            }
        }
        (MoveKind::PassOverMerge, Direction::Backward) => {
            for (a, b) in distinct_edges() {
                if g.classify(a) == Some(VertexModel::PassThrough) && g.classify(b) == Some(VertexModel::Fork(-1)) {
                    sites.push(MoveSite::PassAscendMerge { merge: b, pass: a });
                }
            }
        }
    }
    sites
}

/// Every distinct site of every move in both directions.
pub fn all_sites(g: &ReebFunction) -> Vec<MoveSite> {
    let mut out = Vec::new();
    for kind in MoveKind::ALL {
        out.extend(enumerate_sites(g, kind, Direction::Forward));
        if !kind.is_symmetric() {
            out.extend(enumerate_sites(g, kind, Direction::Backward));
        }
    }
    out
}
