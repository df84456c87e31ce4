//! Python bindings: graphs, tree sets, verifiers, constructions, the mcist
//! table, the feasibility screen and the search.

use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use cist_core::constructions::{self as cons, FamilyId};
use cist_core::error::CistError;
use cist_core::search::{PruneRules, SearchConfig, SearchStatus};
use cist_core::{diagnostics, dot, feasibility, graph, io, search, verify};

fn err(e: CistError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Parses a JSON string into Python objects.
fn loads<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn dumps<T: serde::Serialize>(v: &T) -> PyResult<String> {
    serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pyclass(name = "Graph", module = "cist", frozen)]
pub struct PyGraph {
    inner: Arc<graph::Graph>,
}

fn wrap_graph(g: cist_core::Result<graph::Graph>) -> PyResult<PyGraph> {
    g.map(|g| PyGraph { inner: Arc::new(g) }).map_err(err)
}

#[pymethods]
impl PyGraph {
    #[staticmethod]
    fn complete(m: usize) -> PyResult<Self> {
        wrap_graph(graph::build_complete(m))
    }

    #[staticmethod]
    fn cycle(n: usize) -> PyResult<Self> {
        wrap_graph(graph::build_cycle(n))
    }

    #[staticmethod]
    fn path(n: usize) -> PyResult<Self> {
        wrap_graph(graph::build_path(n))
    }

    #[staticmethod]
    fn km_cn(m: usize, n: usize) -> PyResult<Self> {
        wrap_graph(graph::km_cn(m, n))
    }

    #[staticmethod]
    fn km_pn(m: usize, n: usize) -> PyResult<Self> {
        wrap_graph(graph::km_pn(m, n))
    }

    #[staticmethod]
    fn torus(n1: usize, n2: usize, n3: usize) -> PyResult<Self> {
        wrap_graph(graph::toroidal_grid(n1, n2, n3))
    }

    #[staticmethod]
    fn from_edges(order: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        wrap_graph(graph::Graph::from_edges(order, edges, vec![]))
    }

    /// Parses JSON or edge-list text.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        wrap_graph(io::graph_from_str(text))
    }

    fn product(&self, other: &PyGraph) -> Self {
        PyGraph {
            inner: Arc::new(graph::cartesian_product(&self.inner, &other.inner)),
        }
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().map(|e| (e.u(), e.v())).collect()
    }

    fn degree(&self, v: usize) -> PyResult<usize> {
        if v >= self.inner.order() {
            return Err(PyValueError::new_err(format!("vertex {v} out of range")));
        }
        Ok(self.inner.degree(v))
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    fn to_json(&self) -> String {
        io::graph_to_json(&self.inner)
    }

    fn to_edge_list(&self) -> String {
        io::graph_to_edge_list(&self.inner)
    }

    fn __eq__(&self, other: &PyGraph) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Graph(order={}, edges={})", self.inner.order(), self.inner.edge_count())
    }
}

#[pyclass(name = "TreeSet", module = "cist", frozen)]
pub struct PyTreeSet {
    inner: verify::TreeSet,
}

fn wrap_ts(ts: cist_core::Result<verify::TreeSet>) -> PyResult<PyTreeSet> {
    ts.map(|inner| PyTreeSet { inner }).map_err(err)
}

#[pymethods]
impl PyTreeSet {
    #[new]
    fn new(graph: &PyGraph, trees: Vec<Vec<(usize, usize)>>) -> PyResult<Self> {
        wrap_ts(verify::TreeSet::from_pairs(graph.inner.clone(), trees))
    }

    /// Parses JSON (host embedded) or, with `graph`, either format.
    #[staticmethod]
    #[pyo3(signature = (text, graph=None))]
    fn parse(text: &str, graph: Option<&PyGraph>) -> PyResult<Self> {
        wrap_ts(io::tree_set_from_str(text, graph.map(|g| g.inner.clone()), None))
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn graph(&self) -> PyGraph {
        PyGraph {
            inner: self.inner.host().clone(),
        }
    }

    fn trees(&self) -> Vec<Vec<(usize, usize)>> {
        self.inner
            .trees()
            .iter()
            .map(|t| t.iter().map(|e| (e.u(), e.v())).collect())
            .collect()
    }

    fn inner_vertices(&self, i: usize) -> PyResult<Vec<usize>> {
        if i >= self.inner.k() {
            return Err(PyValueError::new_err(format!("tree {i} out of range")));
        }
        Ok(self.inner.inner_vertices(i))
    }

    fn to_json(&self) -> String {
        io::tree_set_to_json(&self.inner, &io::GraphRef::Inline)
    }

    fn to_edge_list(&self) -> String {
        io::tree_set_to_edge_list(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("TreeSet(k={}, order={})", self.inner.k(), self.inner.order())
    }
}

/// `(valid, failure description or None)` from the pairwise path check.
#[pyfunction]
fn verify_direct(ts: &PyTreeSet) -> PyResult<(bool, Option<String>)> {
    let v = verify::verify_direct(ts.inner.host(), &ts.inner).map_err(err)?;
    Ok((v.valid, v.failure.map(|f| f.to_string())))
}

/// `(valid, failure description or None)` from the inner-vertex check.
#[pyfunction]
fn verify_characterization(ts: &PyTreeSet) -> PyResult<(bool, Option<String>)> {
    let v = verify::verify_characterization(ts.inner.host(), &ts.inner).map_err(err)?;
    Ok((v.valid, v.failure.map(|f| f.to_string())))
}

/// Per-tree diagnostics and the necessary-condition suite as a dict.
#[pyfunction]
fn diagnose<'py>(py: Python<'py>, ts: &PyTreeSet) -> PyResult<Bound<'py, PyAny>> {
    let g = ts.inner.host();
    let report = diagnostics::diagnostics(g, &ts.inner);
    let conditions = diagnostics::check_necessary_conditions(g, &ts.inner).map_err(err)?;
    let text = format!(
        "{{\"report\":{},\"conditions\":{}}}",
        dumps(&report)?,
        dumps(&conditions)?
    );
    loads(py, &text)
}

#[pyfunction]
#[pyo3(signature = (family, r=None, n=None, m=None, p=None, pp=None, q=None))]
fn construct(
    family: &str,
    r: Option<usize>,
    n: Option<usize>,
    m: Option<usize>,
    p: Option<usize>,
    pp: Option<usize>,
    q: Option<usize>,
) -> PyResult<PyTreeSet> {
    let id = FamilyId::from_tag(family, r, n, m, p, pp, q).map_err(err)?;
    wrap_ts(id.build())
}

#[pyfunction]
fn mcist_value(m: usize, n: usize) -> PyResult<usize> {
    cons::mcist_value(m, n).map_err(err)
}

#[pyfunction]
fn mcist_case(m: usize, n: usize) -> PyResult<String> {
    cons::mcist_case(m, n).map(|c| c.to_string()).map_err(err)
}

#[pyfunction]
fn mcist_witness(m: usize, n: usize) -> PyResult<PyTreeSet> {
    wrap_ts(cons::mcist_witness(m, n))
}

/// Surviving `(a0, a1, a2, a3)` profiles for `r` trees in `K_{2r-1} □ C_n`.
#[pyfunction]
fn feasibility_survivors(r: usize, n: usize) -> PyResult<Vec<(usize, usize, usize, usize)>> {
    let s = feasibility::screen_survivors(r, n).map_err(err)?;
    Ok(s.iter()
        .map(|x| (x.profile[0], x.profile[1], x.profile[2], x.profile[3]))
        .collect())
}

/// Rule trace for one distribution as a dict.
#[pyfunction]
fn evaluate_distribution<'py>(py: Python<'py>, r: usize, n: usize, counts: Vec<usize>) -> PyResult<Bound<'py, PyAny>> {
    let d = feasibility::Distribution::new(counts).map_err(err)?;
    let t = feasibility::evaluate_distribution(r, n, &d).map_err(err)?;
    loads(py, &dumps(&t)?)
}

/// `(status, witness or None, nodes_explored)`; status is one of
/// `found`, `exhausted-none`, `budget-exceeded`.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (graph, k, budget_ms=60_000, seed=0, workers=1, max_tree_degree=None, disable=Vec::new()))]
fn search_cists(
    py: Python<'_>,
    graph: &PyGraph,
    k: usize,
    budget_ms: u64,
    seed: u64,
    workers: usize,
    max_tree_degree: Option<usize>,
    disable: Vec<String>,
) -> PyResult<(String, Option<PyTreeSet>, u64)> {
    let mut rules = PruneRules::all();
    for name in &disable {
        rules = rules.without(name).map_err(err)?;
    }
    let cfg = SearchConfig {
        budget_ms,
        seed,
        workers,
        max_tree_degree,
        rules,
    };
    let g = graph.inner.clone();
    let out = py.detach(move || search::search_cists(&g, k, &cfg)).map_err(err)?;
    let status = match out.status {
        SearchStatus::Found => "found",
        SearchStatus::ExhaustedNone => "exhausted-none",
        SearchStatus::BudgetExceeded => "budget-exceeded",
    };
    Ok((
        status.to_string(),
        out.witness.map(|inner| PyTreeSet { inner }),
        out.nodes_explored,
    ))
}

#[pyfunction]
#[pyo3(signature = (graph, trees=None))]
fn export_dot(graph: &PyGraph, trees: Option<&PyTreeSet>) -> PyResult<String> {
    dot::export_dot(&graph.inner, trees.map(|t| &t.inner)).map_err(err)
}

/// The embedded-dataset discrepancy report as a dict.
#[pyfunction]
fn validate_appendix<'py>(py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
    let r = cons::validate_appendix().map_err(err)?;
    loads(py, &dumps(&r)?)
}

#[pymodule]
fn cist(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyTreeSet>()?;
    m.add_function(wrap_pyfunction!(verify_direct, m)?)?;
    m.add_function(wrap_pyfunction!(verify_characterization, m)?)?;
    m.add_function(wrap_pyfunction!(diagnose, m)?)?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(mcist_value, m)?)?;
    m.add_function(wrap_pyfunction!(mcist_case, m)?)?;
    m.add_function(wrap_pyfunction!(mcist_witness, m)?)?;
    m.add_function(wrap_pyfunction!(feasibility_survivors, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(search_cists, m)?)?;
    m.add_function(wrap_pyfunction!(export_dot, m)?)?;
    m.add_function(wrap_pyfunction!(validate_appendix, m)?)?;
    Ok(())
}
