//! Python bindings: graphs, centralities, seed selection and spread estimation.

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

use infmax::diffusion::{self, DiffusionModel};
use infmax::experiment::{self, Algorithm, SelectionParams};
use infmax::games::{self, IndexKind};
use infmax::graph::{self, Directedness, WeightScheme};
use infmax::ldag;
use infmax::shapley::{self, Coalition, DiscountRule};
use infmax::{baselines, Error, NodeId};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyOSError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(to_py)
}

fn directedness(undirected: bool) -> Directedness {
    if undirected {
        Directedness::Undirected
    } else {
        Directedness::Directed
    }
}

/// Immutable weighted digraph with dense node ids `0..node_count`.
#[pyclass(frozen, name = "Graph", module = "infmax")]
pub struct PyGraph {
    inner: infmax::Graph,
}

#[pymethods]
impl PyGraph {
    /// Loads a `SRC TGT [W]` edge list.
    #[staticmethod]
    #[pyo3(signature = (path, undirected = false))]
    fn load(path: &str, undirected: bool) -> PyResult<Self> {
        let inner = graph::load_edge_list(path, directedness(undirected)).map_err(to_py)?;
        Ok(PyGraph { inner })
    }

    /// Parses edge-list text.
    #[staticmethod]
    #[pyo3(signature = (text, undirected = false))]
    fn parse(text: &str, undirected: bool) -> PyResult<Self> {
        let inner = graph::parse_edge_list(text.as_bytes(), directedness(undirected)).map_err(to_py)?;
        Ok(PyGraph { inner })
    }

    /// Builds a directed graph from `(source, target, weight)` triples.
    #[staticmethod]
    fn from_arcs(node_count: usize, arcs: Vec<(NodeId, NodeId, f64)>) -> PyResult<Self> {
        let inner = infmax::Graph::from_arcs(node_count, &arcs).map_err(to_py)?;
        Ok(PyGraph { inner })
    }

    /// Builds an undirected graph; every edge gets `weight` in both directions.
    #[staticmethod]
    #[pyo3(signature = (node_count, edges, weight = 1.0))]
    fn from_edges(node_count: usize, edges: Vec<(NodeId, NodeId)>, weight: f64) -> PyResult<Self> {
        let inner = infmax::Graph::from_undirected_edges(node_count, &edges, weight).map_err(to_py)?;
        Ok(PyGraph { inner })
    }

    /// Returns a copy reweighted by `uniform-ic:P`, `weighted-cascade` or `lt-uniform`.
    fn apply_weights(&self, scheme: &str) -> PyResult<Self> {
        let scheme: WeightScheme = parse(scheme)?;
        let inner = self.inner.apply_weights(scheme).map_err(to_py)?;
        Ok(PyGraph { inner })
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn arc_count(&self) -> usize {
        self.inner.arc_count()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    fn node_by_label(&self, label: &str) -> PyResult<NodeId> {
        self.inner.node_by_label(label).map_err(to_py)
    }

    fn arcs(&self) -> Vec<(NodeId, NodeId, f64)> {
        self.inner.arcs().iter().map(|a| (a.source, a.target, a.weight)).collect()
    }

    fn undirected_degree(&self, v: NodeId) -> PyResult<usize> {
        self.inner.undirected_degree(v).map_err(to_py)
    }

    fn neighbors(&self, v: NodeId) -> PyResult<Vec<NodeId>> {
        self.inner.check_node(v).map_err(to_py)?;
        Ok(self.inner.neighbors(v).to_vec())
    }

    fn is_lt_weighted(&self) -> bool {
        self.inner.is_lt_weighted()
    }

    fn __len__(&self) -> usize {
        self.inner.node_count()
    }

    fn __repr__(&self) -> String {
        format!("Graph(nodes={}, arcs={})", self.inner.node_count(), self.inner.arc_count())
    }
}

/// Shapley value of every node in the fringe game.
#[pyfunction]
fn fringe_shapley(g: &PyGraph) -> Vec<f64> {
    shapley::fringe_shapley(&g.inner).into_vec()
}

/// Shapley value of every node in the surrounding game.
#[pyfunction]
fn surrounding_shapley(g: &PyGraph) -> Vec<f64> {
    shapley::surrounding_shapley(&g.inner).into_vec()
}

#[pyfunction]
#[pyo3(signature = (g, k, literal = false))]
fn dsv_select(py: Python<'_>, g: &PyGraph, k: usize, literal: bool) -> PyResult<Vec<NodeId>> {
    let rule = if literal { DiscountRule::Literal } else { DiscountRule::NewlyInfected };
    py.detach(|| shapley::dsv_select_with(&g.inner, k, rule)).map(|s| s.into_vec()).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (g, k, p = 0.01))]
fn degree_discount_select(g: &PyGraph, k: usize, p: f64) -> PyResult<Vec<NodeId>> {
    baselines::degree_discount_select(&g.inner, p, k).map(|s| s.into_vec()).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (g, k, theta = ldag::DEFAULT_THETA))]
fn greedy_ldag_select(py: Python<'_>, g: &PyGraph, k: usize, theta: f64) -> PyResult<Vec<NodeId>> {
    py.detach(|| baselines::greedy_ldag_select(&g.inner, k, theta)).map(|s| s.into_vec()).map_err(to_py)
}

/// Seeds ranked by Shapley or Banzhaf indices merged over every node's LDAG.
#[pyfunction]
#[pyo3(signature = (g, k, kind = "shapley", theta = ldag::DEFAULT_THETA, budget = games::DEFAULT_BUDGET, rng_seed = 0))]
fn ldag_index_select(
    py: Python<'_>,
    g: &PyGraph,
    k: usize,
    kind: &str,
    theta: f64,
    budget: usize,
    rng_seed: u64,
) -> PyResult<Vec<NodeId>> {
    let kind: IndexKind = parse(kind)?;
    py.detach(|| games::ldag_index_select(&g.inner, k, theta, kind, budget, rng_seed))
        .map(|s| s.into_vec())
        .map_err(to_py)
}

/// Merged per-node LDAG index scores.
#[pyfunction]
#[pyo3(signature = (g, kind = "shapley", theta = ldag::DEFAULT_THETA, budget = games::DEFAULT_BUDGET, rng_seed = 0))]
fn ldag_index_scores(
    py: Python<'_>,
    g: &PyGraph,
    kind: &str,
    theta: f64,
    budget: usize,
    rng_seed: u64,
) -> PyResult<Vec<f64>> {
    let kind: IndexKind = parse(kind)?;
    py.detach(|| games::ldag_index_scores(&g.inner, theta, kind, budget, rng_seed))
        .map(|s| s.into_vec())
        .map_err(to_py)
}

/// Runs any algorithm by its CLI name.
#[pyfunction]
#[pyo3(signature = (
    g, algo, k, model = "lt", theta = ldag::DEFAULT_THETA, budget = games::DEFAULT_BUDGET,
    dd_p = 0.01, celf_runs = 200, rng_seed = 0
))]
#[allow(clippy::too_many_arguments)]
fn select_seeds(
    py: Python<'_>,
    g: &PyGraph,
    algo: &str,
    k: usize,
    model: &str,
    theta: f64,
    budget: usize,
    dd_p: f64,
    celf_runs: usize,
    rng_seed: u64,
) -> PyResult<Vec<NodeId>> {
    let algo: Algorithm = parse(algo)?;
    let params = SelectionParams { model: parse(model)?, theta, ldag_budget: budget, dd_p, celf_runs, rng_seed };
    py.detach(|| experiment::select_seeds(&g.inner, algo, k, &params)).map(|s| s.into_vec()).map_err(to_py)
}

/// Monte Carlo spread estimate as `(mean, stddev, runs)`.
#[pyfunction]
#[pyo3(signature = (g, seeds, model = "lt", runs = 10_000, rng_seed = 0))]
fn estimate_spread(
    py: Python<'_>,
    g: &PyGraph,
    seeds: Vec<NodeId>,
    model: &str,
    runs: usize,
    rng_seed: u64,
) -> PyResult<(f64, f64, usize)> {
    let model: DiffusionModel = parse(model)?;
    let est = py
        .detach(|| diffusion::estimate_spread(&g.inner, model, &seeds, runs, rng_seed))
        .map_err(to_py)?;
    Ok((est.mean, est.stddev, est.runs))
}

/// Exact expected spread by live-edge enumeration; small graphs only.
#[pyfunction]
#[pyo3(signature = (g, seeds, model = "lt"))]
fn exact_spread(g: &PyGraph, seeds: Vec<NodeId>, model: &str) -> PyResult<f64> {
    match parse(model)? {
        DiffusionModel::Ic => diffusion::exact_spread_ic(&g.inner, &seeds),
        DiffusionModel::Lt => diffusion::exact_spread_lt(&g.inner, &seeds),
    }
    .map_err(to_py)
}

/// Members of the LDAG rooted at `root` in topological order, root last.
#[pyfunction]
#[pyo3(signature = (g, root, theta = ldag::DEFAULT_THETA))]
fn ldag_members(g: &PyGraph, root: NodeId, theta: f64) -> PyResult<Vec<NodeId>> {
    let d = ldag::build_ldag(&g.inner, root, theta).map_err(to_py)?;
    Ok(d.members().to_vec())
}

/// Probability that `root` activates inside its LDAG when `seeds` are active.
#[pyfunction]
#[pyo3(signature = (g, root, seeds, theta = ldag::DEFAULT_THETA))]
fn activation_probability(g: &PyGraph, root: NodeId, seeds: Vec<NodeId>, theta: f64) -> PyResult<f64> {
    let d = ldag::build_ldag(&g.inner, root, theta).map_err(to_py)?;
    ldag::activation_probability(&d, &Coalition::new(seeds)).map_err(to_py)
}

/// Exact Shapley or Banzhaf index of every player of one LDAG game,
/// as `(node, value)` pairs.
#[pyfunction]
#[pyo3(signature = (g, root, kind = "shapley", theta = ldag::DEFAULT_THETA))]
fn exact_ldag_index(g: &PyGraph, root: NodeId, kind: &str, theta: f64) -> PyResult<Vec<(NodeId, f64)>> {
    let kind: IndexKind = parse(kind)?;
    let d = ldag::build_ldag(&g.inner, root, theta).map_err(to_py)?;
    let scores = games::exact_index_ldag(&games::LdagGame::new(&d), kind).map_err(to_py)?;
    Ok(scores.iter().collect())
}

#[pymodule(name = "infmax")]
fn infmax_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(fringe_shapley, m)?)?;
    m.add_function(wrap_pyfunction!(surrounding_shapley, m)?)?;
    m.add_function(wrap_pyfunction!(dsv_select, m)?)?;
    m.add_function(wrap_pyfunction!(degree_discount_select, m)?)?;
    m.add_function(wrap_pyfunction!(greedy_ldag_select, m)?)?;
    m.add_function(wrap_pyfunction!(ldag_index_select, m)?)?;
    m.add_function(wrap_pyfunction!(ldag_index_scores, m)?)?;
    m.add_function(wrap_pyfunction!(select_seeds, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_spread, m)?)?;
    m.add_function(wrap_pyfunction!(exact_spread, m)?)?;
    m.add_function(wrap_pyfunction!(ldag_members, m)?)?;
    m.add_function(wrap_pyfunction!(activation_probability, m)?)?;
    m.add_function(wrap_pyfunction!(exact_ldag_index, m)?)?;
    m.add("DEFAULT_THETA", ldag::DEFAULT_THETA)?;
    Ok(())
}
