//! The cobordism group of generic functions on closed surfaces.
//!
//! Disjoint union makes the set of invariant classes a group: the integer
//! part adds and the parity part adds mod 2, so the group is ℤ ⊕ ℤ/2.  This
//! module wraps [`Sigma`] in that group structure, decides whether two Reeb
//! functions are cobordant, produces replayable move-trace certificates, and
//! realizes every class both as a graph and as a function on a concrete
//! triangulated surface.

use std::fmt;

use crate::graph::{ReebFunction, Sigma, ValidationReport};
use crate::height::Height;
use crate::iso::canonical_key;
use crate::moves::{canonical, normalize, NormalizeOutcome};
use crate::surface::{meshes, TriangulatedSurface, VertexFunction};

/// An element of the cobordism group ℤ ⊕ ℤ/2 of generic functions on
/// closed surfaces.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, serde::Serialize, serde::Deserialize)]
pub struct CobordismClass {
    pub sigma: Sigma,
}

/// The order of a group element.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ClassOrder {
    One,
    Two,
    Infinite,
}

impl CobordismClass {
    pub fn new(t: i64, d: u8) -> Self {
        assert!(d <= 1, "parity part must be 0 or 1");
        CobordismClass { sigma: Sigma { t, d } }
    }

    /// The class of a Reeb function, i.e. its complete invariant.
    pub fn of(g: &ReebFunction) -> Result<Self, ValidationReport> {
        Ok(CobordismClass { sigma: g.sigma()? })
    }

    pub fn identity() -> Self {
        CobordismClass::new(0, 0)
    }

    pub fn is_identity(self) -> bool {
        self == Self::identity()
    }

    /// The class of a disjoint union.
    pub fn compose(self, other: Self) -> Self {
        CobordismClass::new(self.sigma.t + other.sigma.t, self.sigma.d ^ other.sigma.d)
    }

    /// The class of the height-flipped function.  Flipping negates every
    /// fork sign and keeps pass-throughs, so it inverts the group element.
    pub fn inverse(self) -> Self {
        CobordismClass::new(-self.sigma.t, self.sigma.d)
    }

    pub fn order(self) -> ClassOrder {
        match (self.sigma.t, self.sigma.d) {
            (0, 0) => ClassOrder::One,
            (0, 1) => ClassOrder::Two,
            _ => ClassOrder::Infinite,
        }
    }

    /// Generators of the group: the free part and the two-torsion part.
    pub fn generators() -> [CobordismClass; 2] {
        [CobordismClass::new(1, 0), CobordismClass::new(0, 1)]
    }

    /// The canonical Reeb function representing this class.
    pub fn realize(self) -> ReebFunction {
        canonical(self.sigma)
    }

    /// A concrete surface and generic function whose Reeb graph lies in this
    /// class: |t| spheres each carrying one extra hump (flipped when t is
    /// negative), one projective plane when the parity is odd, and a plain
    /// sphere for the trivial class.
    pub fn realize_surface(self) -> (TriangulatedSurface, VertexFunction) {
        let mut triangles: Vec<[usize; 3]> = Vec::new();
        let mut values: Vec<Height> = Vec::new();
        let mut add = |tris: Vec<[usize; 3]>, vals: &[i64], values: &mut Vec<Height>| {
            let base = values.len();
            triangles.extend(tris.into_iter().map(|t| t.map(|v| v + base)));
            // Stack the pieces vertically so each occupies its own band.
            let lift = 10 * base as i64;
            values.extend(vals.iter().map(|&v| Height::from_int(v + lift)));
        };
        // One hump: two maxima over one minimum on an octahedron.
        let hump: [i64; 6] = [8, 6, 0, 2, 4, 5];
        let dent: [i64; 6] = hump.map(|v| -v);
        for _ in 0..self.sigma.t.unsigned_abs() {
            let vals = if self.sigma.t > 0 { &hump } else { &dent };
            add(meshes::octahedron(), vals, &mut values);
        }
        if self.sigma.d == 1 {
            add(meshes::projective_plane(), &[0, 1, 2, 3, 4, 5], &mut values);
        }
        if values.is_empty() {
            add(meshes::tetrahedron(), &[0, 1, 2, 3], &mut values);
        }
        let n = values.len();
        let surface = TriangulatedSurface::new(n, triangles)
            .expect("realization meshes are closed surfaces");
        (surface, VertexFunction::new(values))
    }
}

impl fmt::Display for CobordismClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.sigma)
    }
}

/// The outcome of deciding whether two Reeb functions are cobordant: both
/// inputs normalized to their canonical representatives, with full move
/// traces.  When the classes agree the two traces form a certificate, since
/// every move is invertible: run the left trace forward and the right trace
/// backward to rewrite one input into the other.
#[derive(Clone, Debug)]
pub struct Cobordance {
    pub left: NormalizeOutcome,
    pub right: NormalizeOutcome,
}

impl Cobordance {
    pub fn decide(a: &ReebFunction, b: &ReebFunction) -> Result<Cobordance, ValidationReport> {
        Ok(Cobordance { left: normalize(a)?, right: normalize(b)? })
    }

    pub fn cobordant(&self) -> bool {
        self.left.sigma == self.right.sigma
    }

    /// Replays both traces and checks that they justify the verdict: each
    /// must land on the canonical representative of its class, and for a
    /// positive verdict the two endpoints must coincide up to isomorphism.
    pub fn verify(&self) -> Result<(), String> {
        self.left.verify()?;
        self.right.verify()?;
        let same_end =
            canonical_key(self.left.normalized()) == canonical_key(self.right.normalized());
        if self.cobordant() && !same_end {
            return Err("classes agree but the normalized endpoints differ".into());
        }
        if !self.cobordant() && same_end {
            return Err("classes differ but the normalized endpoints coincide".into());
        }
        Ok(())
    }
}
