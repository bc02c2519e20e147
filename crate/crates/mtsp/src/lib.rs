//! Min-max multi-traveling-salesman solving by cluster-then-route
//! decomposition.
//!
//! A dense distance matrix over depots and tasks backs everything else:
//! nearest-depot initialization partitions the tasks, each cluster is
//! routed as an independent depot-anchored TSP with nearest-neighbor
//! construction plus 2-opt, and a greedy single-task migration search
//! over the TopM nearest depots improves the partition under a strict
//! lexicographic objective (maximum route cost first, total cost as the
//! tiebreaker). A genetic-algorithm baseline shares the same matrix,
//! route evaluator, and objective, and a benchmark harness compares the
//! two across scales with per-run wall-clock budgets.

pub mod allocator;
pub mod bench;
pub mod error;
pub mod ga;
pub mod instance;
pub mod kmeans;
pub mod metric;
pub mod plot;
pub mod routing;

pub use allocator::{
    build_neighborhoods, initial_assignment, lex_less, solve, InitStrategy, Neighborhoods,
    Solution, SolverConfig, TraceEntry,
};
pub use error::{Error, Result};
pub use ga::{ga_solve, GaConfig};
pub use instance::{generate, read_instance, write_instance, Instance, Point, Region};
pub use kmeans::{kmeans_cluster, kmeans_initial_assignment, Clustering};
pub use metric::{euclidean, DistanceMatrix, Metric};
pub use plot::{render_convergence_svg, render_routes_svg};
pub use routing::{evaluate_delta_route, route_cost, solve_cluster_tsp, Route, TwoOptConfig};
