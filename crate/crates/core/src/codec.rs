//! On-disk formats: a versioned JSON document for graphs and a Graphviz DOT
//! rendering. Encoding is deterministic (vertices by id, edges sorted) and
//! decode(encode(g)) == g bit-for-bit.

use crate::graph::{ReebFunction, VertexId, VertexModel};
use crate::height::Height;
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
pub(crate) struct VertexDoc {
    id: u64,
    height: Height,
}

/// The JSON shape of a graph; also embedded in trace and certificate files.
#[derive(Serialize, Deserialize)]
pub(crate) struct GraphDoc {
    version: u32,
    vertices: Vec<VertexDoc>,
    edges: Vec<(u64, u64)>,
}

pub(crate) fn to_doc(g: &ReebFunction) -> GraphDoc {
    let vertices = g
        .vertex_ids()
        .map(|v| VertexDoc { id: v.0, height: g.height(v).clone() })
        .collect();
    let mut edges: Vec<(u64, u64)> = g
        .edges()
        .iter()
        .map(|&(a, b)| if a.0 <= b.0 { (a.0, b.0) } else { (b.0, a.0) })
        .collect();
    edges.sort();
    GraphDoc { version: FORMAT_VERSION, vertices, edges }
}

pub(crate) fn from_doc(doc: GraphDoc) -> Result<ReebFunction, DecodeError> {
    if doc.version != FORMAT_VERSION {
        return Err(DecodeError::Version { found: doc.version });
    }
    let mut seen = std::collections::BTreeSet::new();
    for v in &doc.vertices {
        if !seen.insert(v.id) {
            return Err(DecodeError::DuplicateId(v.id));
        }
    }
    for (edge_index, &(a, b)) in doc.edges.iter().enumerate() {
        for id in [a, b] {
            if !seen.contains(&id) {
                return Err(DecodeError::DanglingEdge { edge_index, id });
            }
        }
        if a == b {
            return Err(DecodeError::SelfLoop { edge_index, id: a });
        }
    }
    let g = ReebFunction::from_parts(
        doc.vertices.into_iter().map(|v| (VertexId(v.id), v.height)),
        doc.edges.into_iter().map(|(a, b)| (VertexId(a), VertexId(b))),
    )
    .expect("edge endpoints checked above");
    let report = g.validate();
    if !report.is_valid() {
        return Err(DecodeError::Invalid(report.to_string()));
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecodeError {
    #[error("not valid JSON: {0}")]
    Json(String),
    #[error("unsupported format version {found}, expected {FORMAT_VERSION}")]
    Version { found: u32 },
    #[error("duplicate vertex id {0}")]
    DuplicateId(u64),
    #[error("edge #{edge_index} references unknown vertex id {id}")]
    DanglingEdge { edge_index: usize, id: u64 },
    #[error("edge #{edge_index} is a self-loop at vertex id {id}")]
    SelfLoop { edge_index: usize, id: u64 },
    #[error("graph is not a valid Reeb function:\n{0}")]
    Invalid(String),
}

/// Serializes to the versioned JSON document (pretty-printed, trailing newline).
pub fn encode(g: &ReebFunction) -> String {
    let mut s = serde_json::to_string_pretty(&to_doc(g)).expect("serializable");
    s.push('\n');
    s
}

/// Parses and fully validates a graph document.
pub fn decode(input: &str) -> Result<ReebFunction, DecodeError> {
    let doc: GraphDoc = serde_json::from_str(input).map_err(|e| DecodeError::Json(e.to_string()))?;
    from_doc(doc)
}

/// Graphviz DOT with vertices ranked bottom-to-top by height. An invisible
/// chain through the vertices in height order keeps the vertical order
/// faithful even across components.
pub fn to_dot(g: &ReebFunction) -> String {
    let mut out = String::from("digraph reeb {\n  rankdir=BT;\n  node [fontsize=11];\n");
    let by_height = g.vertices_by_height();
    for &v in &by_height {
        let (label, shape) = match g.classify(v) {
            Some(VertexModel::Fork(s)) => {
                (format!("{v}@{} [{}]", g.height(v), if s > 0 { "+" } else { "-" }), "ellipse")
            }
            Some(VertexModel::PassThrough) => (format!("{v}@{}", g.height(v)), "box"),
            _ => (format!("{v}@{}", g.height(v)), "ellipse"),
        };
        out.push_str(&format!("  {} [label=\"{}\", shape={}];\n", v.0, label, shape));
    }
    for w in by_height.windows(2) {
        out.push_str(&format!("  {} -> {} [style=invis, weight=100];\n", w[0].0, w[1].0));
    }
    for &(a, b) in g.edges() {
        out.push_str(&format!("  {} -> {} [arrowhead=none];\n", a.0, b.0));
    }
    out.push_str("}\n");
    out
}
