//! Python bindings. Reports come back as plain dicts decoded from the
//! JSON the core library produces.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use rigidkit_core::disjoint::{self, UnionStructure};
use rigidkit_core::graph::{Digraph, UGraph};
use rigidkit_core::hom::{self, HomQuery};
use rigidkit_core::search::SearchMode;
use rigidkit_core::symmetrize as sym;
use rigidkit_core::symmetrize::GadgetScheme;
use rigidkit_core::witness::{self, WitnessBound, WitnessProvider};
use rigidkit_core::{omega, phi, search};

fn value_err(e: rigidkit_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, report: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(report).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A finite loopless relation on `0..n`.
#[pyclass(name = "Digraph", module = "rigidkit", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyDigraph {
    inner: Digraph,
}

#[pymethods]
impl PyDigraph {
    #[new]
    #[pyo3(signature = (n, edges=Vec::new()))]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Digraph::new(n, edges).map(|inner| PyDigraph { inner }).map_err(value_err)
    }

    /// Parses the `n m` edge-list format.
    #[staticmethod]
    fn decode(text: &str) -> PyResult<Self> {
        Digraph::decode(text).map(|inner| PyDigraph { inner }).map_err(value_err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().to_vec()
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        self.inner.has_edge(u, v)
    }

    fn encode(&self) -> String {
        self.inner.encode()
    }

    fn to_dot(&self) -> String {
        self.inner.to_dot()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    /// The substructure on `subset`, relabeled ascending, with its labels.
    fn induced(&self, subset: Vec<usize>) -> PyResult<(PyDigraph, Vec<usize>)> {
        let (inner, labels) = self.inner.induced(&subset).map_err(value_err)?;
        Ok((PyDigraph { inner }, labels))
    }

    fn weak_components(&self) -> Vec<Vec<usize>> {
        self.inner.weak_components()
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!("Digraph(n={}, edges={})", self.inner.n(), self.inner.edge_count())
    }
}

fn as_ugraph(g: &PyDigraph) -> PyResult<UGraph> {
    UGraph::try_from(g.inner.clone()).map_err(value_err)
}

/// A disjoint union of equal-size components.
#[pyclass(name = "Union", module = "rigidkit", frozen)]
struct PyUnion {
    inner: UnionStructure,
}

#[pymethods]
impl PyUnion {
    #[getter]
    fn component_size(&self) -> usize {
        self.inner.component_size()
    }

    #[getter]
    fn component_count(&self) -> usize {
        self.inner.component_count()
    }

    fn flat(&self) -> PyDigraph {
        PyDigraph { inner: self.inner.flat().clone() }
    }

    fn address(&self, global: usize) -> (usize, usize) {
        self.inner.address(global)
    }

    fn global_index(&self, component: usize, vertex: usize) -> usize {
        self.inner.global(component, vertex)
    }

    fn blocks(&self) -> Vec<Vec<usize>> {
        self.inner.blocks()
    }

    fn __repr__(&self) -> String {
        format!("Union(components={}, size={})", self.inner.component_count(), self.inner.component_size())
    }
}

#[derive(FromPyObject)]
enum StructureArg<'py> {
    Graph(PyRef<'py, PyDigraph>),
    Union(PyRef<'py, PyUnion>),
}

#[derive(FromPyObject)]
enum WitnessArg {
    Name(String),
    PerVertex(Vec<Vec<usize>>),
}

impl WitnessArg {
    fn provider(self) -> PyResult<WitnessProvider> {
        match self {
            WitnessArg::Name(name) => match name.as_str() {
                "component" => Ok(WitnessProvider::Component),
                "full" => Ok(WitnessProvider::Full),
                other => Err(PyValueError::new_err(format!("unknown witness provider {other:?}"))),
            },
            WitnessArg::PerVertex(sets) => Ok(WitnessProvider::PerVertex(sets)),
        }
    }
}

#[pyfunction]
#[pyo3(signature = (source, target, pins=Vec::new(), limit=None))]
fn enumerate_homs(
    source: &PyDigraph,
    target: &PyDigraph,
    pins: Vec<(usize, usize)>,
    limit: Option<usize>,
) -> PyResult<Vec<Vec<usize>>> {
    let mut q = HomQuery::new(&source.inner, &target.inner);
    for (u, v) in pins {
        q = q.pin(u, v);
    }
    if let Some(l) = limit {
        q = q.limit(l);
    }
    let maps = hom::enumerate_homs(&q).map_err(value_err)?;
    Ok(maps.into_iter().map(|m| m.image).collect())
}

#[pyfunction]
fn is_rigid<'py>(py: Python<'py>, g: &PyDigraph) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &hom::is_rigid(&g.inner))
}

/// Non-adjacent pairs of a symmetric base, in canonical order.
#[pyfunction]
fn compute_t(base: &PyDigraph) -> PyResult<Vec<(usize, usize)>> {
    Ok(phi::compute_t(&as_ugraph(base)?).pairs)
}

#[pyfunction]
fn build_phi_member(base: &PyDigraph, bits: Vec<bool>) -> PyResult<PyDigraph> {
    let member = phi::build_phi_member(&as_ugraph(base)?, &bits).map_err(value_err)?;
    Ok(PyDigraph { inner: member.realized })
}

/// The number of the first violated clause, or `None` for a member.
#[pyfunction]
fn phi_violation(base: &PyDigraph, s: &PyDigraph) -> PyResult<Option<u8>> {
    let v = phi::check_phi_member(&as_ugraph(base)?, &s.inner).map_err(value_err)?;
    Ok(v.map(|v| v.clause()))
}

#[pyfunction]
#[pyo3(signature = (base, samples, seed=0))]
fn phi_sweep<'py>(py: Python<'py>, base: &PyDigraph, samples: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &phi::phi_sweep(&as_ugraph(base)?, samples, seed).map_err(value_err)?)
}

#[pyfunction]
fn build_union(components: Vec<PyRef<'_, PyDigraph>>) -> PyResult<PyUnion> {
    let parts = components.iter().map(|g| g.inner.clone()).collect();
    disjoint::build_union(parts).map(|inner| PyUnion { inner }).map_err(value_err)
}

#[pyfunction]
#[pyo3(signature = (structure, k, witness=WitnessArg::Name("component".into()), strict=false))]
fn verify_diamond<'py>(
    py: Python<'py>,
    structure: StructureArg<'py>,
    k: usize,
    witness: WitnessArg,
    strict: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let (provider, bound) = (witness.provider()?, WitnessBound::new(k, strict));
    let report = match &structure {
        StructureArg::Graph(g) => witness::verify_diamond(&g.inner, &provider, bound),
        StructureArg::Union(u) => witness::verify_diamond(&u.inner, &provider, bound),
    }
    .map_err(value_err)?;
    to_py(py, &report)
}

#[pyfunction]
#[pyo3(signature = (structure, k, witness=WitnessArg::Name("component".into()), strict=false))]
fn verify_star<'py>(
    py: Python<'py>,
    structure: StructureArg<'py>,
    k: usize,
    witness: WitnessArg,
    strict: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let (provider, bound) = (witness.provider()?, WitnessBound::new(k, strict));
    let report = match &structure {
        StructureArg::Graph(g) => witness::verify_star(&g.inner, &provider, bound),
        StructureArg::Union(u) => witness::verify_star(&u.inner, &provider, bound),
    }
    .map_err(value_err)?;
    to_py(py, &report)
}

#[pyfunction]
fn find_witness_collision<'py>(
    py: Python<'py>,
    structure: StructureArg<'py>,
    witnesses: Vec<Vec<usize>>,
) -> PyResult<Bound<'py, PyAny>> {
    let result = match &structure {
        StructureArg::Graph(g) => witness::find_witness_collision(&g.inner, &witnesses),
        StructureArg::Union(u) => witness::find_witness_collision(&u.inner, &witnesses),
    }
    .map_err(value_err)?;
    to_py(py, &result)
}

#[pyfunction]
fn omega_prefix(m: usize) -> PyDigraph {
    PyDigraph { inner: omega::omega_prefix(m).graph }
}

#[pyfunction]
fn verify_omega<'py>(py: Python<'py>, i: usize, m: usize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &omega::verify_omega(i, m).map_err(value_err)?)
}

#[pyfunction]
fn transitive_tournament(n: usize) -> PyDigraph {
    PyDigraph { inner: search::transitive_tournament(n) }
}

#[pyfunction]
#[pyo3(signature = (n, symmetric=true, mode="exhaustive", budget=None, seed=0))]
fn search_rigid<'py>(
    py: Python<'py>,
    n: usize,
    symmetric: bool,
    mode: &str,
    budget: Option<u64>,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let mode = match (mode, budget) {
        ("exhaustive", _) => SearchMode::Exhaustive,
        ("random", Some(budget)) => SearchMode::Random { budget, seed },
        ("random", None) => return Err(PyValueError::new_err("random mode needs a budget")),
        (other, _) => return Err(PyValueError::new_err(format!("unknown mode {other:?}"))),
    };
    to_py(py, &search::search_rigid(n, symmetric, mode).map_err(value_err)?)
}

/// The undirected image under the default scheme, with carrier vertices.
#[pyfunction]
fn symmetrize(g: &PyDigraph) -> (PyDigraph, Vec<usize>) {
    let s = sym::symmetrize(&g.inner, &GadgetScheme::default_scheme());
    (PyDigraph { inner: s.graph.into_digraph() }, s.carriers)
}

#[pyfunction]
fn verify_faithful<'py>(py: Python<'py>, d1: &PyDigraph, d2: &PyDigraph) -> PyResult<Bound<'py, PyAny>> {
    let check = sym::verify_faithful(&d1.inner, &d2.inner, &GadgetScheme::default_scheme()).map_err(value_err)?;
    to_py(py, &check)
}

#[pymodule]
fn rigidkit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDigraph>()?;
    m.add_class::<PyUnion>()?;
    m.add_function(wrap_pyfunction!(enumerate_homs, m)?)?;
    m.add_function(wrap_pyfunction!(is_rigid, m)?)?;
    m.add_function(wrap_pyfunction!(compute_t, m)?)?;
    m.add_function(wrap_pyfunction!(build_phi_member, m)?)?;
    m.add_function(wrap_pyfunction!(phi_violation, m)?)?;
    m.add_function(wrap_pyfunction!(phi_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(build_union, m)?)?;
    m.add_function(wrap_pyfunction!(verify_diamond, m)?)?;
    m.add_function(wrap_pyfunction!(verify_star, m)?)?;
    m.add_function(wrap_pyfunction!(find_witness_collision, m)?)?;
    m.add_function(wrap_pyfunction!(omega_prefix, m)?)?;
    m.add_function(wrap_pyfunction!(verify_omega, m)?)?;
    m.add_function(wrap_pyfunction!(transitive_tournament, m)?)?;
    m.add_function(wrap_pyfunction!(search_rigid, m)?)?;
    m.add_function(wrap_pyfunction!(symmetrize, m)?)?;
    m.add_function(wrap_pyfunction!(verify_faithful, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
