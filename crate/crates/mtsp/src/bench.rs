//! Benchmark harness: runs a scenario x method x seed matrix under a
//! per-run wall-clock budget and records the outcomes as CSV rows.
//! Timeouts are data, not failures.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Duration;

use serde::Serialize;

use crate::allocator::{solve, SolverConfig};
use crate::error::{Error, Result};
use crate::ga::{ga_solve, GaConfig};
use crate::instance::{generate, Region};

pub const CSV_HEADER: [&str; 11] = [
    "k",
    "n",
    "region",
    "seed",
    "method",
    "status",
    "max_cost",
    "total_cost",
    "elapsed_s",
    "iterations",
    "evaluation_calls",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scenario {
    pub k: usize,
    pub n: usize,
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.k, self.n)
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (k, n) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| Error::InvalidInput(format!("scenario `{s}` is not of the form KxN")))?;
        let parse = |v: &str, what: &str| -> Result<usize> {
            let v: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("scenario `{s}`: bad {what}")))?;
            if v == 0 {
                return Err(Error::InvalidInput(format!("scenario `{s}`: {what} must be >= 1")));
            }
            Ok(v)
        };
        Ok(Scenario {
            k: parse(k, "agent count")?,
            n: parse(n, "task count")?,
        })
    }
}

/// Parse a comma-separated scenario list such as `"5x20,10x50"`.
pub fn parse_scenarios(text: &str) -> Result<Vec<Scenario>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Proposed,
    Ga,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Proposed => write!(f, "proposed"),
            Method::Ga => write!(f, "ga"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "proposed" => Ok(Method::Proposed),
            "ga" => Ok(Method::Ga),
            other => Err(Error::InvalidInput(format!(
                "unknown method `{other}` (expected proposed|ga)"
            ))),
        }
    }
}

pub fn parse_methods(text: &str) -> Result<Vec<Method>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Ok,
    Timeout,
    Infeasible,
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunStatus::Ok => write!(f, "ok"),
            RunStatus::Timeout => write!(f, "timeout"),
            RunStatus::Infeasible => write!(f, "infeasible"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchmarkRow {
    pub scenario: Scenario,
    pub region: Region,
    pub seed: u64,
    pub method: Method,
    pub status: RunStatus,
    pub max_cost: Option<f64>,
    pub total_cost: Option<f64>,
    pub elapsed_s: f64,
    pub iterations: usize,
    pub evaluation_calls: u64,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub scenarios: Vec<Scenario>,
    pub methods: Vec<Method>,
    /// Number of instance seeds per scenario; seeds run 0..seeds.
    pub seeds: u64,
    /// Per-run wall-clock budget.
    pub budget: Option<Duration>,
    pub region: Region,
    /// Parallel worker slots; each run stays single-threaded internally.
    pub jobs: usize,
    pub m_override: Option<usize>,
    pub ga_population: Option<usize>,
    pub ga_generations: Option<usize>,
    pub ga_mutation: Option<f64>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            scenarios: vec![
                Scenario { k: 5, n: 20 },
                Scenario { k: 10, n: 50 },
                Scenario { k: 100, n: 500 },
                Scenario { k: 1000, n: 5000 },
            ],
            methods: vec![Method::Proposed, Method::Ga],
            seeds: 3,
            budget: Some(Duration::from_secs(120)),
            region: Region::default(),
            jobs: 1,
            m_override: None,
            ga_population: None,
            ga_generations: None,
            ga_mutation: None,
        }
    }
}

/// GA settings per scale, following the comparison protocol: 80/100 on
/// small instances, 80/1000 once the small budget stops converging, and
/// population 40 with an effectively unbounded generation cap at large
/// scale where only the wall-clock budget terminates the run.
pub fn ga_config_for(scenario: Scenario, seed: u64, cfg: &BenchConfig) -> GaConfig {
    let (population, generations) = if scenario.n <= 20 {
        (80, 100)
    } else if scenario.n <= 50 {
        (80, 1000)
    } else {
        (40, 1_000_000)
    };
    GaConfig {
        population: cfg.ga_population.unwrap_or(population),
        generations: cfg.ga_generations.unwrap_or(generations),
        mutation_rate: cfg.ga_mutation.unwrap_or(0.05),
        seed,
        budget: cfg.budget,
        ..GaConfig::default()
    }
}

pub fn solver_config_for(seed: u64, cfg: &BenchConfig) -> SolverConfig {
    SolverConfig {
        m: cfg.m_override.unwrap_or(5),
        shuffle_seed: seed,
        budget: cfg.budget,
        ..SolverConfig::default()
    }
}

fn run_cell(scenario: Scenario, method: Method, seed: u64, cfg: &BenchConfig) -> Result<BenchmarkRow> {
    let inst = generate(scenario.k, scenario.n, cfg.region, seed)?;
    let outcome = match method {
        Method::Proposed => solve(&inst, &solver_config_for(seed, cfg)),
        Method::Ga => ga_solve(&inst, &ga_config_for(scenario, seed, cfg)),
    };
    let row = |status, max, total, elapsed_s, iterations, evaluation_calls| BenchmarkRow {
        scenario,
        region: cfg.region,
        seed,
        method,
        status,
        max_cost: max,
        total_cost: total,
        elapsed_s,
        iterations,
        evaluation_calls,
    };
    match outcome {
        Ok(sol) => Ok(row(
            RunStatus::Ok,
            Some(sol.max_cost),
            Some(sol.total_cost),
            sol.elapsed_s,
            sol.iterations,
            sol.evaluation_calls,
        )),
        Err(Error::Timeout {
            elapsed_s,
            iterations,
            evaluation_calls,
        }) => Ok(row(RunStatus::Timeout, None, None, elapsed_s, iterations, evaluation_calls)),
        Err(Error::Infeasible(_)) => Ok(row(RunStatus::Infeasible, None, None, 0.0, 0, 0)),
        Err(other) => Err(other),
    }
}

/// Run every (scenario, method, seed) cell. Cells may execute on
/// `cfg.jobs` worker slots; the returned rows are always in
/// (scenario, method, seed) order.
pub fn run(cfg: &BenchConfig) -> Result<Vec<BenchmarkRow>> {
    use rayon::prelude::*;

    let mut cells = Vec::new();
    for &scenario in &cfg.scenarios {
        for &method in &cfg.methods {
            for seed in 0..cfg.seeds {
                cells.push((scenario, method, seed));
            }
        }
    }

    let jobs = cfg.jobs.max(1);
    if jobs == 1 {
        return cells
            .into_iter()
            .map(|(s, m, seed)| run_cell(s, m, seed, cfg))
            .collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot build worker pool: {e}")))?;
    pool.install(|| {
        cells
            .into_par_iter()
            .map(|(s, m, seed)| run_cell(s, m, seed, cfg))
            .collect()
    })
}

/// Write rows with the fixed header and column order. Cost cells are
/// empty for non-ok rows; costs that are present round-trip exactly.
pub fn write_csv<W: Write>(rows: &[BenchmarkRow], dest: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(dest);
    w.write_record(CSV_HEADER)
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    for row in rows {
        let region = format!(
            "{},{},{},{}",
            row.region.xmin, row.region.ymin, row.region.xmax, row.region.ymax
        );
        let fmt_cost = |c: Option<f64>| c.map(|v| v.to_string()).unwrap_or_default();
        w.write_record([
            row.scenario.k.to_string(),
            row.scenario.n.to_string(),
            region,
            row.seed.to_string(),
            row.method.to_string(),
            row.status.to_string(),
            fmt_cost(row.max_cost),
            fmt_cost(row.total_cost),
            format!("{:.6}", row.elapsed_s),
            row.iterations.to_string(),
            row.evaluation_calls.to_string(),
        ])
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    }
    w.flush()?;
    Ok(())
}
