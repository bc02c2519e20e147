//! Per-cluster routing: closed depot-to-depot tours built by
//! nearest-neighbor construction and improved with 2-opt, costed purely
//! through distance-matrix lookups.

use serde::{Deserialize, Serialize};

use crate::metric::DistanceMatrix;

/// 2-opt loop settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoOptConfig {
    /// Maximum number of full improvement sweeps.
    pub max_passes: usize,
    /// Absolute improvement threshold; a segment reversal is applied only
    /// when it shortens the tour by more than this, which keeps
    /// floating-point near-ties from looping forever.
    pub eps: f64,
}

impl Default for TwoOptConfig {
    fn default() -> Self {
        Self {
            max_passes: 50,
            eps: 1e-10,
        }
    }
}

/// One agent's closed tour: visit order (global task indices, depot
/// implicit at both ends) plus its cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Route {
    pub agent: usize,
    pub order: Vec<usize>,
    pub cost: f64,
}

/// Closed-tour cost: depot -> order[0] -> ... -> order[last] -> depot,
/// accumulated left to right. Empty order costs 0.
pub fn route_cost(d: &DistanceMatrix, agent: usize, order: &[usize]) -> f64 {
    debug_assert!(agent < d.depot_count());
    debug_assert!(no_duplicates(order), "duplicate task index in order");
    let Some((&first, rest)) = order.split_first() else {
        return 0.0;
    };
    let mut cost = d.dist(agent, first);
    let mut prev = first;
    for &t in rest {
        cost += d.dist(prev, t);
        prev = t;
    }
    cost + d.dist(prev, agent)
}

fn no_duplicates(order: &[usize]) -> bool {
    let mut seen = order.to_vec();
    seen.sort_unstable();
    seen.windows(2).all(|w| w[0] != w[1])
}

/// Solve the local TSP for one cluster.
///
/// Construction visits the nearest unvisited task from the current
/// position, ties to the lowest global index. Clusters of three or more
/// tasks are then refined with first-improvement 2-opt sweeps until a
/// full pass applies no move or `cfg.max_passes` is reached.
pub fn solve_cluster_tsp(
    d: &DistanceMatrix,
    agent: usize,
    cluster: &[usize],
    cfg: &TwoOptConfig,
) -> Route {
    let mut remaining = cluster.to_vec();
    remaining.sort_unstable();
    let mut order = Vec::with_capacity(remaining.len());
    let mut at = agent;
    while !remaining.is_empty() {
        let mut best = 0;
        let mut best_d = d.dist(at, remaining[0]);
        for (idx, &t) in remaining.iter().enumerate().skip(1) {
            let dd = d.dist(at, t);
            if dd < best_d {
                best_d = dd;
                best = idx;
            }
        }
        at = remaining.remove(best);
        order.push(at);
    }
    if order.len() >= 3 {
        two_opt(d, agent, &mut order, cfg);
    }
    let cost = route_cost(d, agent, &order);
    Route { agent, order, cost }
}

fn two_opt(d: &DistanceMatrix, agent: usize, order: &mut [usize], cfg: &TwoOptConfig) {
    let m = order.len();
    for _ in 0..cfg.max_passes {
        let mut moved = false;
        for i in 0..m {
            for j in (i + 1)..m {
                let before = if i == 0 { agent } else { order[i - 1] };
                let after = if j == m - 1 { agent } else { order[j + 1] };
                let delta = d.dist(before, order[j]) + d.dist(order[i], after)
                    - d.dist(before, order[i])
                    - d.dist(order[j], after);
                if delta < -cfg.eps {
                    order[i..=j].reverse();
                    moved = true;
                }
            }
        }
        if !moved {
            break;
        }
    }
}

/// Price a prospective cluster (current cluster minus a task, or target
/// cluster plus it) by re-solving its TSP from scratch. Returns only the
/// cost; every call corresponds to one evaluation in the solvers'
/// `evaluation_calls` counters.
pub fn evaluate_delta_route(
    d: &DistanceMatrix,
    agent: usize,
    cluster: &[usize],
    cfg: &TwoOptConfig,
) -> f64 {
    solve_cluster_tsp(d, agent, cluster, cfg).cost
}
