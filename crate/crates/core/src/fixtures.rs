//! Frozen example surfaces, each with a pinned height function and a report
//! of everything the library is expected to compute for it.  The files are
//! embedded in the crate so tests can hold results against them; regenerate
//! them only when a format changes, never to make a failing test pass.

use std::collections::BTreeMap;

use crate::graph::Sigma;
use crate::surface::{parse_off, parse_values, TriangulatedSurface, VertexFunction};

/// One embedded example: a surface file, a matching values file, and the
/// expected analysis results as JSON.
pub struct Fixture {
    pub name: &'static str,
    pub off: &'static str,
    pub values: &'static str,
    pub report: &'static str,
}

pub const FIXTURES: [Fixture; 5] = [
    Fixture {
        name: "tetrahedron",
        off: include_str!("../fixtures/tetrahedron.off"),
        values: include_str!("../fixtures/tetrahedron.values"),
        report: include_str!("../fixtures/tetrahedron.report.json"),
    },
    Fixture {
        name: "octahedron",
        off: include_str!("../fixtures/octahedron.off"),
        values: include_str!("../fixtures/octahedron.values"),
        report: include_str!("../fixtures/octahedron.report.json"),
    },
    Fixture {
        name: "torus-seven",
        off: include_str!("../fixtures/torus-seven.off"),
        values: include_str!("../fixtures/torus-seven.values"),
        report: include_str!("../fixtures/torus-seven.report.json"),
    },
    Fixture {
        name: "projective-six",
        off: include_str!("../fixtures/projective-six.off"),
        values: include_str!("../fixtures/projective-six.values"),
        report: include_str!("../fixtures/projective-six.report.json"),
    },
    Fixture {
        name: "klein-nine",
        off: include_str!("../fixtures/klein-nine.off"),
        values: include_str!("../fixtures/klein-nine.values"),
        report: include_str!("../fixtures/klein-nine.report.json"),
    },
];

/// Everything the library is expected to say about a fixture.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct FixtureReport {
    pub name: String,
    pub classification: String,
    pub euler_characteristic: i64,
    pub orientable: bool,
    pub sigma: Sigma,
    /// Critical surface vertices and the local model of their Reeb vertex.
    pub models: BTreeMap<usize, String>,
    /// Whether stored Reeb heights had to be nudged off equal critical values.
    pub perturbed: bool,
}

impl Fixture {
    pub fn surface(&self) -> TriangulatedSurface {
        let mesh = parse_off(self.off).expect("fixture surface file must parse");
        TriangulatedSurface::from_mesh(&mesh).expect("fixture surface must validate")
    }

    pub fn function(&self) -> VertexFunction {
        parse_values(self.values).expect("fixture values file must parse")
    }

    pub fn expected(&self) -> FixtureReport {
        serde_json::from_str(self.report).expect("fixture report must parse")
    }
}

pub fn by_name(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::extract_reeb;

    #[test]
    fn every_fixture_loads_and_matches_its_report() {
        for fixture in &FIXTURES {
            let surface = fixture.surface();
            let f = fixture.function();
            let expected = fixture.expected();
            assert_eq!(expected.name, fixture.name);
            assert_eq!(surface.classification(), expected.classification, "{}", fixture.name);
            assert_eq!(surface.euler_characteristic(), expected.euler_characteristic);
            assert_eq!(surface.is_orientable(), expected.orientable);
            let ex = extract_reeb(&surface, &f).unwrap();
            assert_eq!(ex.graph.sigma().unwrap(), expected.sigma, "{}", fixture.name);
            assert_eq!(ex.perturbed, expected.perturbed);
            let models: BTreeMap<usize, String> = ex
                .vertex_map
                .iter()
                .map(|(&id, &sv)| (sv, ex.graph.classify(id).unwrap().name().to_string()))
                .collect();
            assert_eq!(models, expected.models, "{}", fixture.name);
        }
    }

    #[test]
    fn fixture_names_resolve() {
        assert!(by_name("klein-nine").is_some());
        assert!(by_name("moebius").is_none());
    }

    #[test]
    fn fixture_surfaces_cover_both_orientability_classes() {
        let orientable = FIXTURES.iter().filter(|f| f.expected().orientable).count();
        assert_eq!(orientable, 3);
        assert_eq!(FIXTURES.len() - orientable, 2);
    }
}
