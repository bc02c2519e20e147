//! Cluster-then-route allocation: nearest-depot initialization, TopM
//! candidate neighborhoods, and a greedy single-task migration search
//! under the strict lexicographic objective (max route cost first, total
//! cost as tiebreaker).

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::kmeans::kmeans_initial_assignment;
use crate::metric::DistanceMatrix;
use crate::routing::{solve_cluster_tsp, Route, TwoOptConfig};

/// Strict lexicographic comparison on (max_cost, total_cost) pairs.
/// Exact float comparison on purpose: each accepted move re-prices only
/// two clusters, so strict improvement plus the 2-opt epsilon already
/// guarantees termination.
pub fn lex_less(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 < b.0 || (a.0 == b.0 && a.1 < b.1)
}

/// Two-phase nearest-depot initialization. Phase 1: agents in ascending
/// index order each claim their nearest unclaimed task (ties to the
/// lowest task index), so every agent owns at least one task. Phase 2:
/// every remaining task goes to its nearest depot (ties to the lowest
/// agent index).
pub fn initial_assignment(inst: &Instance, d: &DistanceMatrix) -> Result<Vec<usize>> {
    if inst.n < inst.k {
        return Err(Error::Infeasible(
            "cannot guarantee one task per agent: n < k".to_string(),
        ));
    }
    let (k, n) = (inst.k, inst.n);
    let mut owner = vec![usize::MAX; n];
    for g in 0..k {
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for (i, &o) in owner.iter().enumerate() {
            if o != usize::MAX {
                continue;
            }
            let dd = d.dist(g, d.task(i));
            if dd < best_d {
                best_d = dd;
                best = i;
            }
        }
        owner[best] = g;
    }
    for (i, o) in owner.iter_mut().enumerate() {
        if *o != usize::MAX {
            continue;
        }
        let mut best = 0;
        let mut best_d = d.dist(0, d.task(i));
        for g in 1..k {
            let dd = d.dist(g, d.task(i));
            if dd < best_d {
                best_d = dd;
                best = g;
            }
        }
        *o = best;
    }
    Ok(owner)
}

/// Give every agent that owns no task the task nearest to its depot,
/// taken from a cluster of size >= 2. Agents are processed in ascending
/// index order; ties go to the lowest task index.
pub(crate) fn repair_empty_clusters(d: &DistanceMatrix, owner: &mut [usize]) {
    let k = d.depot_count();
    let mut count = vec![0usize; k];
    for &g in owner.iter() {
        count[g] += 1;
    }
    for g in 0..k {
        if count[g] > 0 {
            continue;
        }
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for (i, &o) in owner.iter().enumerate() {
            if count[o] < 2 {
                continue;
            }
            let dd = d.dist(g, d.task(i));
            if dd < best_d {
                best_d = dd;
                best = i;
            }
        }
        debug_assert!(best != usize::MAX, "no donor cluster; requires n >= k");
        count[owner[best]] -= 1;
        owner[best] = g;
        count[g] += 1;
    }
}

/// Per-task candidate depots: for each task, the `min(M, k)` nearest
/// agents in ascending distance order (ties to the lower agent index).
#[derive(Debug, Clone)]
pub struct Neighborhoods {
    stride: usize,
    data: Vec<usize>,
}

impl Neighborhoods {
    pub fn candidates(&self, task: usize) -> &[usize] {
        &self.data[task * self.stride..(task + 1) * self.stride]
    }

    pub fn stride(&self) -> usize {
        self.stride
    }
}

pub fn build_neighborhoods(inst: &Instance, d: &DistanceMatrix, m: usize) -> Neighborhoods {
    debug_assert!(m >= 1);
    let k = inst.k;
    let stride = m.min(k);
    let mut data = Vec::with_capacity(inst.n * stride);
    let mut agents: Vec<usize> = (0..k).collect();
    for i in 0..inst.n {
        let ti = d.task(i);
        agents.sort_unstable_by(|&a, &b| {
            d.dist(a, ti)
                .partial_cmp(&d.dist(b, ti))
                .expect("distances are finite")
                .then(a.cmp(&b))
        });
        data.extend_from_slice(&agents[..stride]);
    }
    Neighborhoods { stride, data }
}

/// Which initial assignment seeds the migration search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitStrategy {
    #[default]
    NearestDepot,
    KMeans,
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Candidate neighborhood size (clamped to k).
    pub m: usize,
    /// Allow migrations that leave a cluster empty.
    pub allow_empty_clusters: bool,
    pub max_outer_iterations: usize,
    /// Seed for the per-iteration task visit shuffles.
    pub shuffle_seed: u64,
    pub two_opt: TwoOptConfig,
    pub init: InitStrategy,
    /// Wall-clock budget, checked at outer-iteration boundaries.
    pub budget: Option<Duration>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            m: 5,
            allow_empty_clusters: false,
            max_outer_iterations: 1000,
            shuffle_seed: 0,
            two_opt: TwoOptConfig::default(),
            init: InitStrategy::default(),
            budget: None,
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(Error::InvalidInput("M must be at least 1".to_string()));
        }
        if self.max_outer_iterations < 1 {
            return Err(Error::InvalidInput(
                "max_outer_iterations must be at least 1".to_string(),
            ));
        }
        Ok(())
    }
}

/// State of the search at the end of one outer iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub iter: usize,
    pub max: f64,
    pub total: f64,
    pub moves: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub max_cost: f64,
    pub total_cost: f64,
    pub iterations: usize,
    pub elapsed_s: f64,
    pub evaluation_calls: u64,
    pub assignment: Vec<usize>,
    pub routes: Vec<Route>,
    /// Entry 0 captures the initial assignment; one entry per outer
    /// iteration after that.
    pub trace: Vec<TraceEntry>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub method: Option<String>,
}

impl Solution {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solution serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Run the full pipeline: distance matrix, initial assignment, per-cluster
/// 2-opt routing, TopM neighborhoods, then greedy first-improvement
/// migration until an outer iteration applies no move (or the iteration
/// cap / wall-clock budget is hit), and a final 2-opt refinement of every
/// cluster.
pub fn solve(inst: &Instance, cfg: &SolverConfig) -> Result<Solution> {
    let start = Instant::now();
    cfg.validate()?;
    inst.validate()?;
    let d = DistanceMatrix::build(inst)?;
    let owner = match cfg.init {
        InitStrategy::NearestDepot => initial_assignment(inst, &d)?,
        InitStrategy::KMeans => kmeans_initial_assignment(inst, &d)?,
    };
    migrate(inst, &d, owner, cfg, start)
}

fn migrate(
    inst: &Instance,
    d: &DistanceMatrix,
    mut owner: Vec<usize>,
    cfg: &SolverConfig,
    start: Instant,
) -> Result<Solution> {
    let (k, n) = (inst.k, inst.n);

    let mut clusters: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (i, &g) in owner.iter().enumerate() {
        clusters[g].push(d.task(i));
    }
    let mut routes: Vec<Route> = (0..k)
        .map(|g| solve_cluster_tsp(d, g, &clusters[g], &cfg.two_opt))
        .collect();
    let mut costs: Vec<f64> = routes.iter().map(|r| r.cost).collect();
    let mut max_cost = costs.iter().copied().fold(0.0, f64::max);
    let mut total_cost: f64 = costs.iter().sum();

    let neighborhoods = build_neighborhoods(inst, d, cfg.m);

    let mut trace = vec![TraceEntry {
        iter: 0,
        max: max_cost,
        total: total_cost,
        moves: 0,
    }];
    let mut evaluation_calls: u64 = 0;
    let mut iterations = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.shuffle_seed);
    let mut visit: Vec<usize> = (0..n).collect();

    for iter in 1..=cfg.max_outer_iterations {
        if let Some(budget) = cfg.budget {
            if start.elapsed() > budget {
                return Err(Error::Timeout {
                    elapsed_s: start.elapsed().as_secs_f64(),
                    iterations,
                    evaluation_calls,
                });
            }
        }
        visit.shuffle(&mut rng);
        let mut moves = 0;
        for &i in &visit {
            let cur = owner[i];
            if !cfg.allow_empty_clusters && clusters[cur].len() == 1 {
                continue;
            }
            let ti = d.task(i);
            for &g in neighborhoods.candidates(i) {
                if g == cur {
                    continue;
                }
                let mut shrunk = clusters[cur].clone();
                shrunk.retain(|&t| t != ti);
                let mut grown = clusters[g].clone();
                grown.push(ti);
                let new_cur = solve_cluster_tsp(d, cur, &shrunk, &cfg.two_opt);
                let new_tgt = solve_cluster_tsp(d, g, &grown, &cfg.two_opt);
                evaluation_calls += 2;

                let mut new_max = 0.0f64;
                for (h, &cost) in costs.iter().enumerate() {
                    let c = if h == cur {
                        new_cur.cost
                    } else if h == g {
                        new_tgt.cost
                    } else {
                        cost
                    };
                    if c > new_max {
                        new_max = c;
                    }
                }
                let new_total = total_cost - costs[cur] - costs[g] + new_cur.cost + new_tgt.cost;

                if lex_less((new_max, new_total), (max_cost, total_cost)) {
                    owner[i] = g;
                    costs[cur] = new_cur.cost;
                    costs[g] = new_tgt.cost;
                    clusters[cur] = shrunk;
                    clusters[g] = grown;
                    routes[cur] = new_cur;
                    routes[g] = new_tgt;
                    max_cost = new_max;
                    total_cost = new_total;
                    moves += 1;
                    break;
                }
            }
        }
        iterations = iter;
        trace.push(TraceEntry {
            iter,
            max: max_cost,
            total: total_cost,
            moves,
        });
        if moves == 0 {
            break;
        }
    }

    // Final 2-opt over every cluster; aggregates come from these routes.
    let routes: Vec<Route> = (0..k)
        .map(|g| solve_cluster_tsp(d, g, &clusters[g], &cfg.two_opt))
        .collect();
    let max_cost = routes.iter().map(|r| r.cost).fold(0.0, f64::max);
    let total_cost = routes.iter().map(|r| r.cost).sum();

    Ok(Solution {
        max_cost,
        total_cost,
        iterations,
        elapsed_s: start.elapsed().as_secs_f64(),
        evaluation_calls,
        assignment: owner,
        routes,
        trace,
        method: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate, Instance, Point, Region};
    use crate::metric::euclidean;
    use proptest::prelude::*;

    fn matrix(inst: &Instance) -> DistanceMatrix {
        DistanceMatrix::build(inst).unwrap()
    }

    #[test]
    fn lex_less_cases() {
        assert!(lex_less((4.0, 100.0), (5.0, 1.0)));
        assert!(lex_less((5.0, 10.0), (5.0, 11.0)));
        assert!(!lex_less((5.0, 10.0), (5.0, 10.0)));
        assert!(!lex_less((5.0, 11.0), (5.0, 10.0)));
        assert!(!lex_less((6.0, 0.0), (5.0, 100.0)));
    }

    #[test]
    fn single_agent_owns_everything() {
        let inst = generate(1, 12, Region::default(), 4).unwrap();
        let d = matrix(&inst);
        let owner = initial_assignment(&inst, &d).unwrap();
        assert!(owner.iter().all(|&g| g == 0));
    }

    #[test]
    fn two_phase_rule_hand_case() {
        let inst = Instance::new(
            vec![Point::new(0.0, 0.0), Point::new(10.0, 0.0)],
            vec![
                Point::new(1.0, 0.0),
                Point::new(9.0, 0.0),
                Point::new(4.0, 0.0),
            ],
        )
        .unwrap();
        let d = matrix(&inst);
        assert_eq!(initial_assignment(&inst, &d).unwrap(), vec![0, 1, 0]);
    }

    #[test]
    fn initial_assignment_matches_direct_rule() {
        let inst = generate(3, 10, Region::default(), 5).unwrap();
        let d = matrix(&inst);
        let owner = initial_assignment(&inst, &d).unwrap();

        // Independent re-implementation straight from coordinates.
        let mut expected = vec![usize::MAX; inst.n];
        for g in 0..inst.k {
            let mut best = usize::MAX;
            let mut best_d = f64::INFINITY;
            for (i, &o) in expected.iter().enumerate() {
                if o != usize::MAX {
                    continue;
                }
                let dd = euclidean(inst.depots[g], inst.tasks[i]);
                if dd < best_d {
                    best_d = dd;
                    best = i;
                }
            }
            expected[best] = g;
        }
        for (i, o) in expected.iter_mut().enumerate() {
            if *o != usize::MAX {
                continue;
            }
            let mut best = 0;
            let mut best_d = euclidean(inst.depots[0], inst.tasks[i]);
            for g in 1..inst.k {
                let dd = euclidean(inst.depots[g], inst.tasks[i]);
                if dd < best_d {
                    best_d = dd;
                    best = g;
                }
            }
            *o = best;
        }
        assert_eq!(owner, expected);
    }

    #[test]
    fn initial_assignment_rejects_fewer_tasks_than_agents() {
        let inst = generate(5, 4, Region::default(), 1).unwrap();
        let d = matrix(&inst);
        assert!(matches!(
            initial_assignment(&inst, &d),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn neighborhoods_clamp_and_sort() {
        let inst = generate(4, 6, Region::default(), 8).unwrap();
        let d = matrix(&inst);

        let all = build_neighborhoods(&inst, &d, 10);
        assert_eq!(all.stride(), 4);
        for i in 0..inst.n {
            let c = all.candidates(i);
            for w in c.windows(2) {
                assert!(d.dist(w[0], d.task(i)) <= d.dist(w[1], d.task(i)));
            }
            let mut sorted = c.to_vec();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted.len(), 4);
        }

        let one = build_neighborhoods(&inst, &d, 1);
        assert_eq!(one.stride(), 1);
        for i in 0..inst.n {
            let best = (0..inst.k)
                .min_by(|&a, &b| {
                    d.dist(a, d.task(i))
                        .partial_cmp(&d.dist(b, d.task(i)))
                        .unwrap()
                })
                .unwrap();
            assert_eq!(one.candidates(i), &[best]);
        }
    }

    #[test]
    fn neighborhoods_match_full_sort_truncation() {
        let inst = generate(10, 50, Region::default(), 7).unwrap();
        let d = matrix(&inst);
        let nb = build_neighborhoods(&inst, &d, 3);
        assert_eq!(nb.stride(), 3);
        for i in 0..inst.n {
            let mut pairs: Vec<(f64, usize)> = (0..inst.k)
                .map(|g| (euclidean(inst.depots[g], inst.tasks[i]), g))
                .collect();
            pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
            let expected: Vec<usize> = pairs[..3].iter().map(|&(_, g)| g).collect();
            assert_eq!(nb.candidates(i), expected.as_slice(), "task {i}");
        }
    }

    #[test]
    fn single_agent_solution_is_one_tour() {
        let inst = generate(1, 9, Region::default(), 2).unwrap();
        let sol = solve(&inst, &SolverConfig::default()).unwrap();
        assert!(!sol.trace.is_empty());
        assert_eq!(sol.routes.len(), 1);
        assert_eq!(sol.routes[0].order.len(), 9);
        assert_eq!(sol.max_cost, sol.total_cost);
        assert_eq!(sol.trace.last().unwrap().moves, 0);
    }

    #[test]
    fn solution_never_worse_than_initial_assignment() {
        let inst = generate(2, 5, Region::default(), 17).unwrap();
        let d = matrix(&inst);
        let owner = initial_assignment(&inst, &d).unwrap();
        let cfg = SolverConfig::default();
        let mut init_costs = vec![];
        for g in 0..inst.k {
            let cluster: Vec<usize> = (0..inst.n)
                .filter(|&i| owner[i] == g)
                .map(|i| d.task(i))
                .collect();
            init_costs.push(solve_cluster_tsp(&d, g, &cluster, &cfg.two_opt).cost);
        }
        let init_max = init_costs.iter().copied().fold(0.0, f64::max);
        let init_total: f64 = init_costs.iter().sum();

        let sol = solve(&inst, &cfg).unwrap();
        assert!(
            sol.max_cost < init_max
                || (sol.max_cost == init_max && sol.total_cost <= init_total + 1e-9)
        );
    }

    #[test]
    fn converges_quickly_at_small_scale() {
        for seed in [0u64, 1, 2] {
            let inst = generate(5, 20, Region::default(), seed).unwrap();
            let sol = solve(&inst, &SolverConfig::default()).unwrap();
            assert!(sol.iterations <= 30, "seed {seed}: {} iterations", sol.iterations);
            assert_eq!(sol.trace.last().unwrap().moves, 0);
        }
    }

    #[test]
    fn empty_cluster_policy_is_respected() {
        let inst = Instance::new(
            vec![Point::new(0.0, 0.0), Point::new(10.0, 0.0)],
            vec![Point::new(9.0, 0.0), Point::new(10.0, 1.0)],
        )
        .unwrap();

        let forbid = SolverConfig::default();
        let sol = solve(&inst, &forbid).unwrap();
        for g in 0..2 {
            assert!(sol.assignment.contains(&g), "agent {g} left idle");
        }
        assert_eq!(sol.max_cost, 18.0);

        let allow = SolverConfig {
            allow_empty_clusters: true,
            ..SolverConfig::default()
        };
        let sol = solve(&inst, &allow).unwrap();
        assert!(sol.assignment.iter().all(|&o| o == 1));
        assert!(sol.max_cost < 4.0);
    }

    #[test]
    fn kmeans_init_also_solves() {
        let inst = generate(4, 22, Region::default(), 13).unwrap();
        let cfg = SolverConfig {
            init: InitStrategy::KMeans,
            ..SolverConfig::default()
        };
        let sol = solve(&inst, &cfg).unwrap();
        assert_eq!(sol.assignment.len(), 22);
        for g in 0..4 {
            assert!(sol.assignment.contains(&g));
        }
    }

    #[test]
    fn zero_budget_times_out() {
        let inst = generate(3, 30, Region::default(), 6).unwrap();
        let cfg = SolverConfig {
            budget: Some(Duration::ZERO),
            ..SolverConfig::default()
        };
        match solve(&inst, &cfg) {
            Err(Error::Timeout { iterations, .. }) => assert_eq!(iterations, 0),
            other => panic!("expected timeout, got {other:?}"),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn solve_preserves_assignment_integrity(seed in 0u64..1000) {
            let inst = generate(3, 12, Region::default(), seed).unwrap();
            let sol = solve(&inst, &SolverConfig::default()).unwrap();
            prop_assert_eq!(sol.assignment.len(), 12);
            for &g in &sol.assignment {
                prop_assert!(g < 3);
            }
            // Routes partition the tasks according to the assignment.
            let d = DistanceMatrix::build(&inst).unwrap();
            let mut seen = [false; 12];
            for route in &sol.routes {
                for &t in &route.order {
                    let i = t - inst.k;
                    prop_assert!(!seen[i]);
                    seen[i] = true;
                    prop_assert_eq!(sol.assignment[i], route.agent);
                }
                prop_assert!((route.cost - crate::routing::route_cost(&d, route.agent, &route.order)).abs() <= 1e-9);
            }
            prop_assert!(seen.iter().all(|&s| s));
            // Default policy keeps every cluster non-empty.
            for g in 0..3 {
                prop_assert!(sol.assignment.contains(&g));
            }
            // Trace is lexicographically non-increasing.
            for w in sol.trace.windows(2) {
                prop_assert!(!lex_less((w[0].max, w[0].total), (w[1].max, w[1].total)));
            }
        }
    }
}
