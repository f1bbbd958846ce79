//! Python bindings for the `reebcob` library.
//!
//! The module exposes the core types and operations: `ReebGraph` (an
//! abstract Reeb function), the local-move calculus (`move_sites`,
//! `apply_move`, `normalize`, `replay_trace`), the cobordism decision
//! (`cobordant`), surface extraction (`extract`, `surface_info`), and class
//! realization (`realize`, `enumerate_classes`). Exact rational heights
//! cross the boundary as decimal strings.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use reebcob::cobordism::Cobordance;
use reebcob::iso::is_isomorphic;
use reebcob::moves::{
    all_sites, apply, canonical, decode_trace, encode_trace, normalize, MoveSite,
};
use reebcob::surface::morse::{parse_values, VertexFunction};
use reebcob::surface::off::{parse_off, write_off, OffMesh};
use reebcob::surface::{extract_reeb, TriangulatedSurface};
use reebcob::{codec, Height, ReebFunction, Sigma, VertexId};

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_height(text: &str) -> PyResult<Height> {
    Height::parse(text).map_err(value_err)
}

fn check_parity(d: u8) -> PyResult<()> {
    if d > 1 {
        return Err(value_err("parity part must be 0 or 1"));
    }
    Ok(())
}

/// An abstract Reeb function: a finite multigraph with vertex degrees 1, 2,
/// or 3 and pairwise-distinct rational heights.
#[pyclass(name = "ReebGraph", eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyReebGraph {
    inner: ReebFunction,
}

#[pymethods]
impl PyReebGraph {
    /// The empty graph (the unit of disjoint union).
    #[new]
    fn new() -> Self {
        PyReebGraph { inner: ReebFunction::new() }
    }

    /// Parses the versioned JSON document format; rejects any document whose
    /// graph breaks the structural invariants.
    #[staticmethod]
    fn decode(text: &str) -> PyResult<Self> {
        Ok(PyReebGraph { inner: codec::decode(text).map_err(value_err)? })
    }

    /// The canonical representative of the cobordism class (t, d).
    #[staticmethod]
    fn canonical(t: i64, d: u8) -> PyResult<Self> {
        check_parity(d)?;
        Ok(PyReebGraph { inner: canonical(Sigma { t, d }) })
    }

    /// Serializes to the versioned JSON document format (deterministic).
    fn encode(&self) -> String {
        codec::encode(&self.inner)
    }

    /// Graphviz DOT rendering, ranked bottom-to-top by height.
    fn to_dot(&self) -> String {
        codec::to_dot(&self.inner)
    }

    /// Adds a vertex at the given height (a decimal or fraction string) and
    /// returns its id.
    fn add_vertex(&mut self, height: &str) -> PyResult<u64> {
        Ok(self.inner.add_vertex(parse_height(height)?).0)
    }

    /// Adds an edge between two existing, distinct vertices.
    fn add_edge(&mut self, a: u64, b: u64) -> PyResult<()> {
        let (a, b) = (VertexId(a), VertexId(b));
        if !self.inner.contains_vertex(a) || !self.inner.contains_vertex(b) {
            return Err(value_err("unknown vertex id"));
        }
        if a == b {
            return Err(value_err("self-loops are not allowed"));
        }
        self.inner.add_edge(a, b);
        Ok(())
    }

    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn component_count(&self) -> usize {
        self.inner.components().len()
    }

    /// Vertex ids in ascending height order.
    fn vertices(&self) -> Vec<u64> {
        self.inner.vertices_by_height().into_iter().map(|v| v.0).collect()
    }

    /// Edges as (lower id, upper id) pairs.
    fn edges(&self) -> Vec<(u64, u64)> {
        self.inner.edges().iter().map(|&(a, b)| (a.0, b.0)).collect()
    }

    /// The height of a vertex as a decimal string.
    fn height(&self, v: u64) -> PyResult<String> {
        if !self.inner.contains_vertex(VertexId(v)) {
            return Err(value_err("unknown vertex id"));
        }
        Ok(self.inner.height(VertexId(v)).to_string())
    }

    /// The local model of a vertex: "min", "max", "pass", "split", or
    /// "merge". None if its degree breaks the invariants.
    fn classify(&self, v: u64) -> PyResult<Option<&'static str>> {
        if !self.inner.contains_vertex(VertexId(v)) {
            return Err(value_err("unknown vertex id"));
        }
        Ok(self.inner.classify(VertexId(v)).map(|m| m.name()))
    }

    /// All invariant violations, as human-readable strings; empty means the
    /// graph is a valid Reeb function.
    fn violations(&self) -> Vec<String> {
        self.inner.validate().violations.iter().map(|v| v.to_string()).collect()
    }

    fn is_valid(&self) -> bool {
        self.inner.validate().is_valid()
    }

    /// The complete cobordism invariant (t, d).
    fn sigma(&self) -> PyResult<(i64, u8)> {
        let s = self.inner.sigma().map_err(value_err)?;
        Ok((s.t, s.d))
    }

    fn euler_characteristic(&self) -> i64 {
        self.inner.euler_characteristic()
    }

    /// Structural equivalence: a vertex bijection matching edges and the
    /// height order within every component.
    fn is_isomorphic(&self, other: &PyReebGraph) -> bool {
        is_isomorphic(&self.inner, &other.inner)
    }

    fn disjoint_union(&self, other: &PyReebGraph) -> Self {
        PyReebGraph { inner: self.inner.disjoint_union(&other.inner) }
    }

    /// The graph of the negated function: heights reflected, forks swapped.
    fn flipped(&self) -> Self {
        PyReebGraph { inner: self.inner.flipped() }
    }

    fn __repr__(&self) -> String {
        match self.inner.sigma() {
            Ok(s) => format!(
                "ReebGraph({} vertices, {} edges, sigma {})",
                self.inner.vertex_count(),
                self.inner.edge_count(),
                s
            ),
            Err(_) => format!(
                "ReebGraph({} vertices, {} edges, invalid)",
                self.inner.vertex_count(),
                self.inner.edge_count()
            ),
        }
    }
}

/// One fully-determined rewrite site of one of the eleven local moves.
#[pyclass(name = "MoveSite", skip_from_py_object)]
#[derive(Clone)]
struct PyMoveSite {
    inner: MoveSite,
}

#[pymethods]
impl PyMoveSite {
    /// The move's letter, `a` through `k`.
    #[getter]
    fn letter(&self) -> String {
        self.inner.kind().letter().to_string()
    }

    /// "forward" or "backward".
    #[getter]
    fn direction(&self) -> &'static str {
        match self.inner.direction() {
            reebcob::moves::Direction::Forward => "forward",
            reebcob::moves::Direction::Backward => "backward",
        }
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("sites serialize")
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyMoveSite { inner: serde_json::from_str(text).map_err(value_err)? })
    }

    fn __repr__(&self) -> String {
        format!("MoveSite({})", self.to_json())
    }
}

/// The result of extracting a Reeb graph from a surface with a generic
/// vertex function.
#[pyclass(name = "Extraction", frozen)]
struct PyExtraction {
    /// The extracted Reeb graph.
    #[pyo3(get)]
    graph: PyReebGraph,
    /// Reeb vertex id -> critical surface vertex index.
    #[pyo3(get)]
    vertex_map: BTreeMap<u64, usize>,
    /// Whether tied critical values forced a deterministic height nudge.
    #[pyo3(get)]
    perturbed: bool,
}

/// Every applicable site of every move, in a deterministic order.
#[pyfunction]
fn move_sites(g: &PyReebGraph) -> PyResult<Vec<PyMoveSite>> {
    let report = g.inner.validate();
    if !report.is_valid() {
        return Err(value_err(report));
    }
    Ok(all_sites(&g.inner).into_iter().map(|inner| PyMoveSite { inner }).collect())
}

/// Applies one move site, choosing fresh heights automatically.
#[pyfunction]
fn apply_move(g: &PyReebGraph, site: &PyMoveSite) -> PyResult<PyReebGraph> {
    let out = apply(&g.inner, &site.inner).map_err(value_err)?;
    Ok(PyReebGraph { inner: out.graph })
}

/// Rewrites the graph to the canonical representative of its class.
/// Returns the canonical graph and the full move trace as JSON.
#[pyfunction(name = "normalize")]
fn normalize_py(g: &PyReebGraph) -> PyResult<(PyReebGraph, String)> {
    let outcome = normalize(&g.inner).map_err(value_err)?;
    outcome.verify().map_err(value_err)?;
    let trace = encode_trace(&outcome.trace);
    Ok((PyReebGraph { inner: outcome.trace.end }, trace))
}

/// Replays a JSON move trace and returns its end graph; fails if any step
/// does not apply or the recorded end disagrees.
#[pyfunction]
fn replay_trace(text: &str) -> PyResult<PyReebGraph> {
    let trace = decode_trace(text).map_err(value_err)?;
    let end = trace.replay().map_err(value_err)?;
    Ok(PyReebGraph { inner: end })
}

/// Whether two valid Reeb graphs are cobordant, i.e. have equal invariants
/// and are connected by local moves.
#[pyfunction]
fn cobordant(a: &PyReebGraph, b: &PyReebGraph) -> PyResult<bool> {
    let decision = Cobordance::decide(&a.inner, &b.inner).map_err(value_err)?;
    decision.verify().map_err(value_err)?;
    Ok(decision.cobordant())
}

fn surface_from_off(off_text: &str) -> PyResult<(OffMesh, TriangulatedSurface)> {
    let mesh = parse_off(off_text).map_err(value_err)?;
    let surface = TriangulatedSurface::from_mesh(&mesh).map_err(value_err)?;
    Ok((mesh, surface))
}

/// Extracts the Reeb graph of a vertex function on a closed triangulated
/// surface in OFF format. Heights default to the z coordinates; pass
/// `values_text` to override them.
#[pyfunction]
#[pyo3(signature = (off_text, values_text=None))]
fn extract(off_text: &str, values_text: Option<&str>) -> PyResult<PyExtraction> {
    let (mesh, surface) = surface_from_off(off_text)?;
    let f = match values_text {
        Some(text) => parse_values(text).map_err(value_err)?,
        None => VertexFunction::new(mesh.z_values()),
    };
    let out = extract_reeb(&surface, &f).map_err(value_err)?;
    Ok(PyExtraction {
        graph: PyReebGraph { inner: out.graph },
        vertex_map: out.vertex_map.into_iter().map(|(v, s)| (v.0, s)).collect(),
        perturbed: out.perturbed,
    })
}

/// Classification data for a closed triangulated surface in OFF format.
#[pyfunction]
fn surface_info<'py>(py: Python<'py>, off_text: &str) -> PyResult<Bound<'py, PyDict>> {
    let (_, surface) = surface_from_off(off_text)?;
    let info = PyDict::new(py);
    info.set_item("vertices", surface.vertex_count())?;
    info.set_item("triangles", surface.triangles().len())?;
    info.set_item("components", surface.component_count())?;
    info.set_item("euler_characteristic", surface.euler_characteristic())?;
    info.set_item("orientable", surface.is_orientable())?;
    info.set_item("classification", surface.classification())?;
    Ok(info)
}

/// A closed surface and vertex function whose Reeb graph lies in class
/// (t, d), returned as (OFF text, values text).
#[pyfunction]
fn realize(t: i64, d: u8) -> PyResult<(String, String)> {
    check_parity(d)?;
    let (surface, f) = reebcob::cobordism::CobordismClass::new(t, d).realize_surface();
    let coords = (0..surface.vertex_count())
        .map(|i| {
            [Height::from_int(i as i64), Height::from_int(3 * i as i64 % 7), f.value(i).clone()]
        })
        .collect();
    let mesh = OffMesh { coords, triangles: surface.triangles().to_vec() };
    Ok((write_off(&mesh), reebcob::surface::morse::write_values(&f)))
}

/// One representative per isomorphism class with at most `max_vertices`
/// vertices (capped at 8 to keep the search tractable).
#[pyfunction]
fn enumerate_classes(max_vertices: usize) -> PyResult<Vec<PyReebGraph>> {
    if max_vertices > 8 {
        return Err(value_err("max_vertices above 8 is intractable here"));
    }
    Ok(reebcob::enumerate::enumerate_classes(max_vertices)
        .into_iter()
        .map(|inner| PyReebGraph { inner })
        .collect())
}

#[pymodule]
fn reebcob_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyReebGraph>()?;
    m.add_class::<PyMoveSite>()?;
    m.add_class::<PyExtraction>()?;
    m.add_function(wrap_pyfunction!(move_sites, m)?)?;
    m.add_function(wrap_pyfunction!(apply_move, m)?)?;
    m.add_function(wrap_pyfunction!(normalize_py, m)?)?;
    m.add_function(wrap_pyfunction!(replay_trace, m)?)?;
    m.add_function(wrap_pyfunction!(cobordant, m)?)?;
    m.add_function(wrap_pyfunction!(extract, m)?)?;
    m.add_function(wrap_pyfunction!(surface_info, m)?)?;
    m.add_function(wrap_pyfunction!(realize, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_classes, m)?)?;
    Ok(())
}
