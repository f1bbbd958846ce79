//! Reeb graphs of generic smooth functions on closed surfaces, a calculus of
//! local moves on them, and the complete two-part cobordism invariant.
//!
//! The central type is [`graph::ReebFunction`]: a finite multigraph whose
//! vertices carry pairwise-distinct heights and locally look like an
//! extremum, a monotone pass-through, or a fork. Such graphs arise as Reeb
//! graphs of generic functions on closed surfaces ([`surface::extract_reeb`])
//! and form a calculus under eleven local moves ([`moves`]) together with
//! order-preserving height changes. Two graphs are connected by moves exactly
//! when their invariants [`graph::Sigma`] agree; [`cobordism`] decides this
//! and produces replayable certificates.

pub mod cobordism;
pub mod codec;
pub mod enumerate;
pub mod fixtures;
pub mod graph;
pub mod height;
pub mod iso;
pub mod moves;
pub mod reachability;
pub mod surface;

pub use graph::{Extremum, ReebFunction, Sigma, VertexId, VertexModel};
pub use height::Height;
