//! Reading and writing triangle meshes in the OFF text format.
//!
//! The accepted dialect: an optional `OFF` header line, a counts line
//! `vertices faces edges` (the edge count is ignored), then one line per
//! vertex with three decimal coordinates and one line per face starting with
//! the vertex count of the face, which must be 3.  `#` starts a comment;
//! blank lines are skipped.  Face lines may carry trailing tokens (colors),
//! which are ignored.

use crate::height::{Height, HeightParseError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OffError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: {source}")]
    BadNumber {
        line: usize,
        #[source]
        source: HeightParseError,
    },
    #[error("unexpected end of file: {expected}")]
    Truncated { expected: String },
}

/// A raw triangle mesh as read from an OFF file: exact decimal coordinates
/// and face index triples, not yet validated as a surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OffMesh {
    pub coords: Vec<[Height; 3]>,
    pub triangles: Vec<[usize; 3]>,
}

impl OffMesh {
    /// The z coordinate of every vertex, the default height function.
    pub fn z_values(&self) -> Vec<Height> {
        self.coords.iter().map(|c| c[2].clone()).collect()
    }
}

fn malformed(line: usize, msg: impl Into<String>) -> OffError {
    OffError::Malformed { line, msg: msg.into() }
}

pub fn parse_off(text: &str) -> Result<OffMesh, OffError> {
    // Significant lines with their 1-based numbers, comments stripped.
    let mut lines = text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            None
        } else {
            Some((i + 1, body))
        }
    });

    let (first_no, first) = lines
        .next()
        .ok_or_else(|| OffError::Truncated { expected: "a header or counts line".into() })?;
    let counts_line = if first.eq_ignore_ascii_case("off") {
        lines.next().ok_or_else(|| OffError::Truncated { expected: "the counts line".into() })?
    } else {
        (first_no, first)
    };

    let (line, body) = counts_line;
    let counts: Vec<&str> = body.split_whitespace().collect();
    if counts.len() != 3 {
        return Err(malformed(line, format!("expected `vertices faces edges`, got {body:?}")));
    }
    let nv: usize = counts[0]
        .parse()
        .map_err(|_| malformed(line, format!("bad vertex count {:?}", counts[0])))?;
    let nf: usize = counts[1]
        .parse()
        .map_err(|_| malformed(line, format!("bad face count {:?}", counts[1])))?;

    let mut coords = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (line, body) = lines
            .next()
            .ok_or_else(|| OffError::Truncated { expected: format!("{nv} vertex lines") })?;
        let parts: Vec<&str> = body.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(malformed(line, format!("expected 3 coordinates, got {}", parts.len())));
        }
        let mut c = Vec::with_capacity(3);
        for p in parts {
            c.push(Height::parse(p).map_err(|source| OffError::BadNumber { line, source })?);
        }
        coords.push([c[0].clone(), c[1].clone(), c[2].clone()]);
    }

    let mut triangles = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (line, body) = lines
            .next()
            .ok_or_else(|| OffError::Truncated { expected: format!("{nf} face lines") })?;
        let parts: Vec<&str> = body.split_whitespace().collect();
        let arity: usize = parts[0]
            .parse()
            .map_err(|_| malformed(line, format!("bad face arity {:?}", parts[0])))?;
        if arity != 3 {
            return Err(malformed(line, format!("only triangles are supported, got a {arity}-gon")));
        }
        if parts.len() < 4 {
            return Err(malformed(line, "face line is missing vertex indices"));
        }
        let mut t = [0usize; 3];
        for (slot, p) in t.iter_mut().zip(&parts[1..4]) {
            let idx: usize =
                p.parse().map_err(|_| malformed(line, format!("bad vertex index {p:?}")))?;
            if idx >= nv {
                return Err(malformed(line, format!("vertex index {idx} out of range (< {nv})")));
            }
            *slot = idx;
        }
        triangles.push(t);
    }

    if let Some((line, body)) = lines.next() {
        return Err(malformed(line, format!("unexpected trailing content {body:?}")));
    }
    Ok(OffMesh { coords, triangles })
}

pub fn write_off(mesh: &OffMesh) -> String {
    let mut out = String::from("OFF\n");
    out.push_str(&format!("{} {} 0\n", mesh.coords.len(), mesh.triangles.len()));
    for c in &mesh.coords {
        out.push_str(&format!(
            "{} {} {}\n",
            c[0].to_decimal_string(),
            c[1].to_decimal_string(),
            c[2].to_decimal_string()
        ));
    }
    for t in &mesh.triangles {
        out.push_str(&format!("3 {} {} {}\n", t[0], t[1], t[2]));
    }
    out
}
