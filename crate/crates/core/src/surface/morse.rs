//! Piecewise-linear height functions given by one value per surface vertex,
//! and the local classification of vertices into regular points, extrema,
//! simple saddles, and degenerate critical points.
//!
//! Ties between equal values are broken by vertex index, so every function
//! behaves as if its values were pairwise distinct.  A function is *generic*
//! when no vertex is a degenerate critical point (its link alternates more
//! than four times between the sublevel and superlevel side).

use rand::seq::SliceRandom;
use rand::Rng;

use super::TriangulatedSurface;
use crate::height::{Height, HeightParseError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ValuesError {
    #[error("line {line}: {source}")]
    BadNumber {
        line: usize,
        #[source]
        source: HeightParseError,
    },
    #[error("expected {expected} values (one per vertex), got {got}")]
    CountMismatch { expected: usize, got: usize },
}

/// How a vertex sits inside its star.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexKind {
    Minimum,
    Regular,
    /// Simple saddle: the link crosses the level exactly four times.  Whether
    /// it splits, merges, or passes a contour through depends on the global
    /// contour structure, not on the star alone.
    Saddle,
    Maximum,
    /// The link alternates `alternations` (six or more) times: not a simple
    /// critical point, so the function is not generic.
    Degenerate { alternations: usize },
}

/// A PL height function: one exact value per surface vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexFunction {
    values: Vec<Height>,
}

impl VertexFunction {
    pub fn new(values: Vec<Height>) -> Self {
        VertexFunction { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, v: usize) -> &Height {
        &self.values[v]
    }

    pub fn values(&self) -> &[Height] {
        &self.values
    }

    /// Symbolic comparison with index tie-break: is `u` strictly below `v`?
    pub fn below(&self, u: usize, v: usize) -> bool {
        (&self.values[u], u) < (&self.values[v], v)
    }

    /// Checks the value count against a surface.
    pub fn check_matches(&self, surface: &TriangulatedSurface) -> Result<(), ValuesError> {
        if self.values.len() != surface.vertex_count() {
            return Err(ValuesError::CountMismatch {
                expected: surface.vertex_count(),
                got: self.values.len(),
            });
        }
        Ok(())
    }

    /// Classifies `v` by walking its link once and counting how often the
    /// neighbors switch between the below-side and the above-side.
    pub fn classify(&self, surface: &TriangulatedSurface, v: usize) -> VertexKind {
        let link = surface.link(v);
        let states: Vec<bool> = link.iter().map(|&w| self.below(w, v)).collect();
        let alternations = states
            .iter()
            .zip(states.iter().cycle().skip(1))
            .filter(|(a, b)| a != b)
            .count();
        match alternations {
            0 if states[0] => VertexKind::Maximum,
            0 => VertexKind::Minimum,
            2 => VertexKind::Regular,
            4 => VertexKind::Saddle,
            n => VertexKind::Degenerate { alternations: n },
        }
    }

    /// All non-regular vertices in index order.
    pub fn criticals(&self, surface: &TriangulatedSurface) -> Vec<(usize, VertexKind)> {
        (0..surface.vertex_count())
            .map(|v| (v, self.classify(surface, v)))
            .filter(|(_, k)| *k != VertexKind::Regular)
            .collect()
    }

    /// True when no vertex is a degenerate critical point.
    pub fn is_generic(&self, surface: &TriangulatedSurface) -> bool {
        (0..surface.vertex_count())
            .all(|v| !matches!(self.classify(surface, v), VertexKind::Degenerate { .. }))
    }

    /// Samples a generic function by shuffling the values `0..n` until no
    /// degenerate critical point remains.  Panics if none is found within a
    /// generous retry budget (which would indicate a pathological complex).
    pub fn random_generic(surface: &TriangulatedSurface, rng: &mut impl Rng) -> VertexFunction {
        let n = surface.vertex_count();
        for _ in 0..10_000 {
            let mut perm: Vec<i64> = (0..n as i64).collect();
            perm.shuffle(rng);
            let f = VertexFunction::new(perm.into_iter().map(Height::from_int).collect());
            if f.is_generic(surface) {
                return f;
            }
        }
        panic!("no generic vertex ordering found after 10000 shuffles");
    }
}

/// Parses a values file: one decimal number per line, `#` comments and blank
/// lines ignored, the i-th number giving the value at vertex i.
pub fn parse_values(text: &str) -> Result<VertexFunction, ValuesError> {
    let mut values = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let h = Height::parse(body).map_err(|source| ValuesError::BadNumber { line: i + 1, source })?;
        values.push(h);
    }
    Ok(VertexFunction::new(values))
}

pub fn write_values(f: &VertexFunction) -> String {
    let mut out = String::new();
    for v in f.values() {
        out.push_str(&v.to_decimal_string());
        out.push('\n');
    }
    out
}
