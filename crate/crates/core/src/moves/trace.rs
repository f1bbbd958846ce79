//! Replayable rewrite traces: sequences of move applications and
//! order-preserving height changes from a start graph to an end graph.

use crate::codec::{self, DecodeError, GraphDoc};
use crate::graph::{ReebFunction, ValidationReport, VertexId};
use crate::height::Height;
use crate::moves::{apply_with_heights, MoveError, MoveSite};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TraceStep {
    /// One move application with its pinned fresh heights.
    Move { site: MoveSite, fresh: Vec<Height> },
    /// A complete reassignment of heights that preserves, within each
    /// connected component, the relative order of its vertices (components
    /// may slide past one another).
    Reparametrize {
        #[serde(with = "height_map")]
        heights: BTreeMap<VertexId, Height>,
    },
}

/// Serializes a vertex-to-height map as a list of `{id, height}` records so
/// the JSON form matches the vertex list in graph documents.
mod height_map {
    use std::collections::BTreeMap;

    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Serialize};

    use crate::graph::VertexId;
    use crate::height::Height;

    #[derive(Serialize, Deserialize)]
    struct Entry {
        id: VertexId,
        height: Height,
    }

    pub fn serialize<S>(map: &BTreeMap<VertexId, Height>, ser: S) -> Result<S::Ok, S::Error>
    where
        S: serde::Serializer,
    {
        let mut seq = ser.serialize_seq(Some(map.len()))?;
        for (id, height) in map {
            seq.serialize_element(&Entry {
                id: *id,
                height: height.clone(),
            })?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D>(de: D) -> Result<BTreeMap<VertexId, Height>, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let entries = Vec::<Entry>::deserialize(de)?;
        let mut map = BTreeMap::new();
        for entry in entries {
            let id = entry.id;
            if map.insert(entry.id, entry.height).is_some() {
                return Err(serde::de::Error::custom(format!(
                    "duplicate vertex id {} in height assignment",
                    id.0
                )));
            }
        }
        Ok(map)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveTrace {
    pub start: ReebFunction,
    pub steps: Vec<TraceStep>,
    pub end: ReebFunction,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ReparamError {
    #[error("height map does not cover exactly the graph's vertices (missing or extra {0})")]
    VertexSetMismatch(VertexId),
    #[error("new heights are not pairwise distinct: {0} and {1} both map to {2}")]
    DuplicateHeight(VertexId, VertexId, Height),
    #[error("order within a component changed: {0} was below {1}")]
    OrderChanged(VertexId, VertexId),
}

/// Applies a full height reassignment, requiring per-component order
/// preservation (the discrete stand-in for a homotopy of the function).
pub fn reparametrize(g: &ReebFunction, heights: &BTreeMap<VertexId, Height>) -> Result<ReebFunction, ReparamError> {
    for v in g.vertex_ids() {
        if !heights.contains_key(&v) {
            return Err(ReparamError::VertexSetMismatch(v));
        }
    }
    for &v in heights.keys() {
        if !g.contains_vertex(v) {
            return Err(ReparamError::VertexSetMismatch(v));
        }
    }
    let mut seen: BTreeMap<&Height, VertexId> = BTreeMap::new();
    for (&v, h) in heights {
        if let Some(&other) = seen.get(h) {
            return Err(ReparamError::DuplicateHeight(other, v, h.clone()));
        }
        seen.insert(h, v);
    }
    for comp in g.components() {
        let mut vs: Vec<VertexId> = comp.into_iter().collect();
        vs.sort_by(|a, b| g.height(*a).cmp(g.height(*b)));
        for w in vs.windows(2) {
            if heights[&w[0]] >= heights[&w[1]] {
                return Err(ReparamError::OrderChanged(w[0], w[1]));
            }
        }
    }
    Ok(g.with_heights(heights))
}

#[derive(Debug, thiserror::Error)]
pub enum ReplayError {
    #[error("start graph is invalid:\n{0}")]
    InvalidStart(ValidationReport),
    #[error("step #{index} failed: {source}")]
    Move {
        index: usize,
        #[source]
        source: MoveError,
    },
    #[error("step #{index} failed: {source}")]
    Reparametrize {
        index: usize,
        #[source]
        source: ReparamError,
    },
    #[error("replayed graph does not match the recorded end graph")]
    EndMismatch,
}

impl MoveTrace {
    /// Re-executes every step from `start` and checks the result is exactly
    /// (bit-for-bit) the recorded `end`. Returns the replayed graph.
    pub fn replay(&self) -> Result<ReebFunction, ReplayError> {
        let report = self.start.validate();
        if !report.is_valid() {
            return Err(ReplayError::InvalidStart(report));
        }
        let mut g = self.start.clone();
        for (index, step) in self.steps.iter().enumerate() {
            g = match step {
                TraceStep::Move { site, fresh } => apply_with_heights(&g, site, fresh)
                    .map_err(|source| ReplayError::Move { index, source })?
                    .graph,
                TraceStep::Reparametrize { heights } => reparametrize(&g, heights)
                    .map_err(|source| ReplayError::Reparametrize { index, source })?,
            };
        }
        if g != self.end {
            return Err(ReplayError::EndMismatch);
        }
        Ok(g)
    }

    pub fn move_count(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, TraceStep::Move { .. })).count()
    }
}

/// Records a trace while the caller drives moves and reparametrizations.
#[derive(Clone, Debug)]
pub struct TraceBuilder {
    start: ReebFunction,
    current: ReebFunction,
    steps: Vec<TraceStep>,
}

impl TraceBuilder {
    pub fn new(start: ReebFunction) -> Self {
        TraceBuilder { current: start.clone(), start, steps: Vec::new() }
    }

    pub fn current(&self) -> &ReebFunction {
        &self.current
    }

    /// Applies a move with default heights and records the step.
    pub fn apply(&mut self, site: &MoveSite) -> Result<&ReebFunction, MoveError> {
        let applied = crate::moves::apply(&self.current, site)?;
        self.steps.push(TraceStep::Move { site: site.clone(), fresh: applied.fresh });
        self.current = applied.graph;
        Ok(&self.current)
    }

    pub fn reparametrize(&mut self, heights: BTreeMap<VertexId, Height>) -> Result<&ReebFunction, ReparamError> {
        self.current = super::trace::reparametrize(&self.current, &heights)?;
        self.steps.push(TraceStep::Reparametrize { heights });
        Ok(&self.current)
    }

    pub fn finish(self) -> MoveTrace {
        MoveTrace { start: self.start, steps: self.steps, end: self.current }
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct TraceDoc {
    version: u32,
    start: GraphDoc,
    steps: Vec<TraceStep>,
    end: GraphDoc,
}

pub fn encode_trace(t: &MoveTrace) -> String {
    let doc = TraceDoc {
        version: codec::FORMAT_VERSION,
        start: codec::to_doc(&t.start),
        steps: t.steps.clone(),
        end: codec::to_doc(&t.end),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

pub fn decode_trace(input: &str) -> Result<MoveTrace, DecodeError> {
    let doc: TraceDoc = serde_json::from_str(input).map_err(|e| DecodeError::Json(e.to_string()))?;
    if doc.version != codec::FORMAT_VERSION {
        return Err(DecodeError::Version { found: doc.version });
    }
    Ok(MoveTrace {
        start: codec::from_doc(doc.start)?,
        steps: doc.steps,
        end: codec::from_doc(doc.end)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::MoveSite;

    fn h(s: &str) -> Height {
        Height::parse(s).unwrap()
    }

    #[test]
    fn build_replay_and_serialize_a_trace() {
        let mut b = TraceBuilder::new(ReebFunction::new());
        b.apply(&MoveSite::Birth).unwrap();
        let vs = b.current().vertices_by_height();
        b.apply(&MoveSite::PassInsert { lower: vs[0], upper: vs[1] }).unwrap();
        let map: BTreeMap<VertexId, Height> = b
            .current()
            .vertices_by_height()
            .into_iter()
            .enumerate()
            .map(|(i, v)| (v, h(&format!("{}", 10 * i))))
            .collect();
        b.reparametrize(map).unwrap();
        let trace = b.finish();
        assert_eq!(trace.move_count(), 2);
        let end = trace.replay().unwrap();
        assert_eq!(end, trace.end);

        let s = encode_trace(&trace);
        let back = decode_trace(&s).unwrap();
        assert_eq!(back, trace);
        back.replay().unwrap();
    }

    #[test]
    fn tampered_trace_fails_replay() {
        let mut b = TraceBuilder::new(ReebFunction::new());
        b.apply(&MoveSite::Birth).unwrap();
        let mut trace = b.finish();
        // Corrupt the end graph.
        trace.end = ReebFunction::new();
        assert!(matches!(trace.replay(), Err(ReplayError::EndMismatch)));
    }

    #[test]
    fn reparametrize_rejects_order_changes_within_component() {
        let mut g = ReebFunction::new();
        let a = g.add_vertex(h("0"));
        let b = g.add_vertex(h("1"));
        g.add_edge(a, b);
        let flipped: BTreeMap<VertexId, Height> = [(a, h("5")), (b, h("2"))].into();
        assert!(matches!(reparametrize(&g, &flipped), Err(ReparamError::OrderChanged(_, _))));
        let ok: BTreeMap<VertexId, Height> = [(a, h("-3")), (b, h("-2.5"))].into();
        assert!(reparametrize(&g, &ok).is_ok());
    }

    #[test]
    fn reparametrize_lets_components_slide_past_each_other() {
        let mut g = ReebFunction::new();
        let a = g.add_vertex(h("0"));
        let b = g.add_vertex(h("1"));
        g.add_edge(a, b);
        let c = g.add_vertex(h("2"));
        let d = g.add_vertex(h("3"));
        g.add_edge(c, d);
        // Swap the two components on the height line.
        let map: BTreeMap<VertexId, Height> = [(a, h("10")), (b, h("11")), (c, h("0")), (d, h("1"))].into();
        let out = reparametrize(&g, &map).unwrap();
        assert!(out.validate().is_valid());
    }

    #[test]
    fn reparametrize_rejects_wrong_vertex_set_and_collisions() {
        let mut g = ReebFunction::new();
        let a = g.add_vertex(h("0"));
        let b = g.add_vertex(h("1"));
        g.add_edge(a, b);
        let missing: BTreeMap<VertexId, Height> = [(a, h("0"))].into();
        assert!(matches!(reparametrize(&g, &missing), Err(ReparamError::VertexSetMismatch(_))));
        let extra: BTreeMap<VertexId, Height> =
            [(a, h("0")), (b, h("1")), (VertexId(9), h("2"))].into();
        assert!(matches!(reparametrize(&g, &extra), Err(ReparamError::VertexSetMismatch(_))));
        let collide: BTreeMap<VertexId, Height> = [(a, h("4")), (b, h("4.0"))].into();
        assert!(matches!(reparametrize(&g, &collide), Err(ReparamError::DuplicateHeight(..))));
    }
}
