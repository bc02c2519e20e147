//! Python bindings: `Instance`, `Solution`, the two solvers, and the SVG
//! renderers, mirroring the `mtsp` CLI surface in-process.

use std::time::Duration;

use pyo3::exceptions::{PyIOError, PyRuntimeError, PyTimeoutError, PyValueError};
use pyo3::prelude::*;

use mtsp::allocator::{InitStrategy, SolverConfig};
use mtsp::ga::GaConfig;
use mtsp::instance::{Point, Region};
use mtsp::routing::TwoOptConfig;

fn to_py_err(e: mtsp::Error) -> PyErr {
    match e {
        mtsp::Error::Timeout { .. } => PyTimeoutError::new_err(e.to_string()),
        mtsp::Error::Io(_) => PyIOError::new_err(e.to_string()),
        mtsp::Error::Capacity(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn budget_from_seconds(seconds: Option<f64>) -> PyResult<Option<Duration>> {
    match seconds {
        None => Ok(None),
        Some(s) if s.is_finite() && s >= 0.0 => Ok(Some(Duration::from_secs_f64(s))),
        Some(s) => Err(PyValueError::new_err(format!(
            "budget_s must be >= 0, got {s}"
        ))),
    }
}

/// An MTSP instance: k depots and n task locations in the plane.
#[pyclass(name = "Instance", frozen)]
pub struct PyInstance {
    inner: mtsp::Instance,
}

#[pymethods]
impl PyInstance {
    /// Build an instance from explicit (x, y) depot and task coordinates.
    #[new]
    fn new(depots: Vec<(f64, f64)>, tasks: Vec<(f64, f64)>) -> PyResult<Self> {
        let inner = mtsp::Instance::new(
            depots.into_iter().map(|(x, y)| Point::new(x, y)).collect(),
            tasks.into_iter().map(|(x, y)| Point::new(x, y)).collect(),
        )
        .map_err(to_py_err)?;
        Ok(Self { inner })
    }

    /// Sample k depots and n tasks uniformly over the region
    /// (xmin, ymin, xmax, ymax); deterministic in the seed.
    #[staticmethod]
    #[pyo3(signature = (k, n, seed=0, region=(0.0, 0.0, 10.0, 10.0)))]
    fn generate(k: usize, n: usize, seed: u64, region: (f64, f64, f64, f64)) -> PyResult<Self> {
        let region = Region::new(region.0, region.1, region.2, region.3);
        let inner = mtsp::generate(k, n, region, seed).map_err(to_py_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = mtsp::Instance::from_json(text).map_err(to_py_err)?;
        Ok(Self { inner })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn seed(&self) -> Option<u64> {
        self.inner.seed
    }

    #[getter]
    fn region(&self) -> Option<(f64, f64, f64, f64)> {
        self.inner.region.map(|r| (r.xmin, r.ymin, r.xmax, r.ymax))
    }

    #[getter]
    fn depots(&self) -> Vec<(f64, f64)> {
        self.inner.depots.iter().map(|p| (p.x, p.y)).collect()
    }

    #[getter]
    fn tasks(&self) -> Vec<(f64, f64)> {
        self.inner.tasks.iter().map(|p| (p.x, p.y)).collect()
    }

    fn __repr__(&self) -> String {
        match self.inner.seed {
            Some(seed) => format!("Instance(k={}, n={}, seed={seed})", self.inner.k, self.inner.n),
            None => format!("Instance(k={}, n={})", self.inner.k, self.inner.n),
        }
    }
}

/// A solver result: assignment, per-agent routes, costs, and the
/// per-iteration convergence trace.
#[pyclass(name = "Solution", frozen)]
pub struct PySolution {
    inner: mtsp::Solution,
}

#[pymethods]
impl PySolution {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = mtsp::Solution::from_json(text).map_err(to_py_err)?;
        Ok(Self { inner })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn max_cost(&self) -> f64 {
        self.inner.max_cost
    }

    #[getter]
    fn total_cost(&self) -> f64 {
        self.inner.total_cost
    }

    #[getter]
    fn iterations(&self) -> usize {
        self.inner.iterations
    }

    #[getter]
    fn elapsed_s(&self) -> f64 {
        self.inner.elapsed_s
    }

    #[getter]
    fn evaluation_calls(&self) -> u64 {
        self.inner.evaluation_calls
    }

    #[getter]
    fn assignment(&self) -> Vec<usize> {
        self.inner.assignment.clone()
    }

    /// Routes as (agent, visit order of global task indices, cost).
    #[getter]
    fn routes(&self) -> Vec<(usize, Vec<usize>, f64)> {
        self.inner
            .routes
            .iter()
            .map(|r| (r.agent, r.order.clone(), r.cost))
            .collect()
    }

    /// Trace as (iteration, max_cost, total_cost, moves).
    #[getter]
    fn trace(&self) -> Vec<(usize, f64, f64, usize)> {
        self.inner
            .trace
            .iter()
            .map(|t| (t.iter, t.max, t.total, t.moves))
            .collect()
    }

    #[getter]
    fn method(&self) -> Option<String> {
        self.inner.method.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "Solution(max_cost={}, total_cost={}, iterations={})",
            self.inner.max_cost, self.inner.total_cost, self.inner.iterations
        )
    }
}

/// Run the migration solver.
#[pyfunction]
#[pyo3(signature = (inst, m=5, init="nearest", allow_empty_clusters=false,
    max_outer_iterations=1000, shuffle_seed=0, two_opt_max_passes=50, budget_s=None))]
#[allow(clippy::too_many_arguments)]
fn solve(
    inst: &PyInstance,
    m: usize,
    init: &str,
    allow_empty_clusters: bool,
    max_outer_iterations: usize,
    shuffle_seed: u64,
    two_opt_max_passes: usize,
    budget_s: Option<f64>,
) -> PyResult<PySolution> {
    let init = match init {
        "nearest" => InitStrategy::NearestDepot,
        "kmeans" => InitStrategy::KMeans,
        other => {
            return Err(PyValueError::new_err(format!(
                "init must be 'nearest' or 'kmeans', got '{other}'"
            )))
        }
    };
    let cfg = SolverConfig {
        m,
        allow_empty_clusters,
        max_outer_iterations,
        shuffle_seed,
        two_opt: TwoOptConfig {
            max_passes: two_opt_max_passes,
            ..TwoOptConfig::default()
        },
        init,
        budget: budget_from_seconds(budget_s)?,
    };
    let inner = mtsp::solve(&inst.inner, &cfg).map_err(to_py_err)?;
    Ok(PySolution { inner })
}

/// Run the genetic-algorithm baseline.
#[pyfunction]
#[pyo3(signature = (inst, population=80, generations=100, mutation_rate=0.05,
    tournament_size=3, elitism=2, seed=0, budget_s=None))]
#[allow(clippy::too_many_arguments)]
fn ga_solve(
    inst: &PyInstance,
    population: usize,
    generations: usize,
    mutation_rate: f64,
    tournament_size: usize,
    elitism: usize,
    seed: u64,
    budget_s: Option<f64>,
) -> PyResult<PySolution> {
    let cfg = GaConfig {
        population,
        generations,
        mutation_rate,
        tournament_size,
        elitism,
        seed,
        budget: budget_from_seconds(budget_s)?,
        ..GaConfig::default()
    };
    let inner = mtsp::ga_solve(&inst.inner, &cfg).map_err(to_py_err)?;
    Ok(PySolution { inner })
}

/// Render the allocation as an SVG document string.
#[pyfunction]
fn render_routes_svg(inst: &PyInstance, sol: &PySolution) -> PyResult<String> {
    mtsp::render_routes_svg(&inst.inner, &sol.inner).map_err(to_py_err)
}

/// Render the convergence trace as an SVG document string.
#[pyfunction]
fn render_convergence_svg(sol: &PySolution) -> PyResult<String> {
    mtsp::render_convergence_svg(&sol.inner.trace).map_err(to_py_err)
}

#[pymodule]
fn mtsp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyInstance>()?;
    m.add_class::<PySolution>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(ga_solve, m)?)?;
    m.add_function(wrap_pyfunction!(render_routes_svg, m)?)?;
    m.add_function(wrap_pyfunction!(render_convergence_svg, m)?)?;
    Ok(())
}
