//! Exhaustive oracle for small instances, kept independent of the solver
//! path: distances come straight from coordinates and tours are
//! enumerated, never taken from the routing module.

use itertools::Itertools;
use mtsp::instance::{Instance, Point};

pub fn euclid(a: Point, b: Point) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    (dx * dx + dy * dy).sqrt()
}

/// Closed-tour cost for one fixed visit order, accumulated left to right.
pub fn tour_cost(depot: Point, order: &[Point]) -> f64 {
    let Some(first) = order.first() else {
        return 0.0;
    };
    let mut cost = euclid(depot, *first);
    for pair in order.windows(2) {
        cost += euclid(pair[0], pair[1]);
    }
    cost + euclid(*order.last().unwrap(), depot)
}

/// Exact optimum over every visit order.
pub fn exact_tour_cost(depot: Point, tasks: &[Point]) -> f64 {
    if tasks.is_empty() {
        return 0.0;
    }
    tasks
        .iter()
        .copied()
        .permutations(tasks.len())
        .map(|perm| tour_cost(depot, &perm))
        .fold(f64::INFINITY, f64::min)
}

/// Lexicographic optimum of (max_cost, total_cost) over all k^n
/// assignments with exact per-cluster tours. Only sane for tiny
/// instances; per-cluster costs are memoized by task bitmask.
pub fn oracle_lex_best(inst: &Instance) -> (f64, f64) {
    let k = inst.k;
    let n = inst.n;
    assert!(n <= 10, "oracle is exponential; keep n tiny");
    assert!((k as u32).checked_pow(n as u32).is_some());

    let masks = 1usize << n;
    let mut cluster_cost = vec![vec![0.0f64; masks]; k];
    for (g, row) in cluster_cost.iter_mut().enumerate() {
        for (mask, slot) in row.iter_mut().enumerate() {
            let tasks: Vec<Point> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| inst.tasks[i])
                .collect();
            *slot = exact_tour_cost(inst.depots[g], &tasks);
        }
    }

    let mut best = (f64::INFINITY, f64::INFINITY);
    let total_assignments = (k as u64).pow(n as u32);
    for code in 0..total_assignments {
        let mut rest = code;
        let mut agent_mask = vec![0usize; k];
        for i in 0..n {
            let g = (rest % k as u64) as usize;
            rest /= k as u64;
            agent_mask[g] |= 1 << i;
        }
        let mut max = 0.0f64;
        let mut total = 0.0;
        for g in 0..k {
            let c = cluster_cost[g][agent_mask[g]];
            if c > max {
                max = c;
            }
            total += c;
        }
        if max < best.0 || (max == best.0 && total < best.1) {
            best = (max, total);
        }
    }
    best
}
