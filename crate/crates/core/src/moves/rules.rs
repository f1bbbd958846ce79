//! The move table shipped as data. Each entry describes one of the eleven
//! moves: its letter, what forward and backward do, and the exact vertex and
//! edge counts a forward application adds. Tests cross-check the table
//! against the implementation so the two cannot drift apart.

use crate::moves::MoveKind;
use std::sync::OnceLock;

#[derive(Clone, Debug, serde::Deserialize)]
pub struct MoveRule {
    pub letter: char,
    pub name: String,
    pub symmetric: bool,
    pub forward: String,
    pub backward: String,
    /// Vertices added by a forward application.
    pub delta_vertices: i64,
    /// Edges added by a forward application (net).
    pub delta_edges: i64,
    /// Models of the vertices a forward application creates, in ascending
    /// height order ("min", "max", "pass", "split", "merge").
    pub creates: Vec<String>,
}

#[derive(serde::Deserialize)]
struct RuleDoc {
    version: u32,
    moves: Vec<MoveRule>,
}

const RULES_JSON: &str = include_str!("../../data/move_rules.json");

/// The full table, ordered a through k.
pub fn move_rules() -> &'static [MoveRule] {
    static RULES: OnceLock<Vec<MoveRule>> = OnceLock::new();
    RULES.get_or_init(|| {
        let doc: RuleDoc = serde_json::from_str(RULES_JSON).expect("embedded rule table parses");
        assert_eq!(doc.version, 1, "unexpected rule table version");
        doc.moves
    })
}

impl MoveRule {
    pub fn kind(&self) -> MoveKind {
        MoveKind::from_letter(self.letter).expect("rule letters match move kinds")
    }
}
