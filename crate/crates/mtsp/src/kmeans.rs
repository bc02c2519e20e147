//! Alternating k-means over task points, available as an alternative
//! assignment initializer (`--init kmeans`).

use crate::allocator::repair_empty_clusters;
use crate::error::{Error, Result};
use crate::instance::{Instance, Point};
use crate::metric::{euclidean, DistanceMatrix};

#[derive(Debug, Clone)]
pub struct Clustering {
    pub centroids: Vec<Point>,
    /// Cluster index per input point.
    pub membership: Vec<usize>,
    /// Final objective value: sum of squared point-to-centroid distances.
    pub inertia: f64,
    /// Inertia after each assignment/update round, in order.
    pub history: Vec<f64>,
}

fn squared_dist(a: Point, b: Point) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    dx * dx + dy * dy
}

/// Alternate assignment (nearest centroid, ties to the lower cluster
/// index) and update (arithmetic mean of members; an empty cluster keeps
/// its previous centroid) until membership is stable for a full
/// iteration, inertia improves by less than `tol`, or `max_iters`.
pub fn kmeans_cluster(
    points: &[Point],
    k: usize,
    init_centroids: &[Point],
    max_iters: usize,
    tol: f64,
) -> Result<Clustering> {
    if k == 0 || k > points.len() {
        return Err(Error::InvalidInput(format!(
            "k must be in [1, {}], got {k}",
            points.len()
        )));
    }
    if init_centroids.len() != k {
        return Err(Error::InvalidInput(format!(
            "expected {k} initial centroids, got {}",
            init_centroids.len()
        )));
    }
    if max_iters == 0 {
        return Err(Error::InvalidInput("max_iters must be at least 1".to_string()));
    }

    let mut centroids = init_centroids.to_vec();
    let mut membership = vec![usize::MAX; points.len()];
    let mut history = Vec::new();
    let mut prev_inertia = f64::INFINITY;

    for _ in 0..max_iters {
        let mut changed = false;
        for (i, p) in points.iter().enumerate() {
            let mut best = 0;
            let mut best_d = squared_dist(*p, centroids[0]);
            for (c, mu) in centroids.iter().enumerate().skip(1) {
                let dd = squared_dist(*p, *mu);
                if dd < best_d {
                    best_d = dd;
                    best = c;
                }
            }
            if membership[i] != best {
                membership[i] = best;
                changed = true;
            }
        }

        let mut sum_x = vec![0.0; k];
        let mut sum_y = vec![0.0; k];
        let mut count = vec![0usize; k];
        for (i, p) in points.iter().enumerate() {
            let g = membership[i];
            sum_x[g] += p.x;
            sum_y[g] += p.y;
            count[g] += 1;
        }
        for g in 0..k {
            if count[g] > 0 {
                centroids[g] = Point::new(sum_x[g] / count[g] as f64, sum_y[g] / count[g] as f64);
            }
        }

        let inertia: f64 = points
            .iter()
            .enumerate()
            .map(|(i, p)| squared_dist(*p, centroids[membership[i]]))
            .sum();
        history.push(inertia);
        let done = !changed || prev_inertia - inertia < tol;
        prev_inertia = inertia;
        if done {
            break;
        }
    }

    Ok(Clustering {
        centroids,
        membership,
        inertia: prev_inertia,
        history,
    })
}

/// Seed an assignment by clustering tasks with the depots as initial
/// centroids, matching each cluster to its nearest unmatched depot
/// (clusters processed in ascending index order), and transferring the
/// nearest task from a cluster of size >= 2 to any agent left empty.
pub fn kmeans_initial_assignment(inst: &Instance, d: &DistanceMatrix) -> Result<Vec<usize>> {
    if inst.n < inst.k {
        return Err(Error::Infeasible(
            "cannot guarantee one task per agent: n < k".to_string(),
        ));
    }
    let k = inst.k;
    let clustering = kmeans_cluster(&inst.tasks, k, &inst.depots, 100, 1e-9)?;

    let mut matched = vec![usize::MAX; k];
    let mut taken = vec![false; k];
    for (c, mu) in clustering.centroids.iter().enumerate() {
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for (g, depot) in inst.depots.iter().enumerate() {
            if taken[g] {
                continue;
            }
            let dd = euclidean(*mu, *depot);
            if dd < best_d {
                best_d = dd;
                best = g;
            }
        }
        matched[c] = best;
        taken[best] = true;
    }

    let mut owner: Vec<usize> = clustering.membership.iter().map(|&c| matched[c]).collect();
    repair_empty_clusters(d, &mut owner);
    Ok(owner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate, Region};

    #[test]
    fn k_equals_n_with_points_as_centroids_is_a_fixed_point() {
        let pts = vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 1.0),
            Point::new(-3.0, 4.0),
        ];
        let c = kmeans_cluster(&pts, 3, &pts, 10, 1e-12).unwrap();
        assert_eq!(c.membership, vec![0, 1, 2]);
        assert_eq!(c.inertia, 0.0);
        assert_eq!(c.centroids, pts);
    }

    #[test]
    fn symmetric_pairs_split_cleanly() {
        let pts = vec![
            Point::new(0.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(10.0, 0.0),
            Point::new(10.0, 1.0),
        ];
        let init = vec![Point::new(0.0, 0.5), Point::new(10.0, 0.5)];
        let c = kmeans_cluster(&pts, 2, &init, 100, 1e-12).unwrap();
        assert_eq!(c.membership, vec![0, 0, 1, 1]);
        assert_eq!(c.centroids[0], Point::new(0.0, 0.5));
        assert_eq!(c.centroids[1], Point::new(10.0, 0.5));
        assert!((c.inertia - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inertia_is_non_increasing_and_centroids_are_member_means() {
        let inst = generate(3, 12, Region::default(), 11).unwrap();
        let init: Vec<Point> = inst.tasks[..3].to_vec();
        let c = kmeans_cluster(&inst.tasks, 3, &init, 100, 0.0).unwrap();
        for w in c.history.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "inertia went up: {} -> {}", w[0], w[1]);
        }
        for g in 0..3 {
            let members: Vec<Point> = inst
                .tasks
                .iter()
                .zip(&c.membership)
                .filter(|(_, &m)| m == g)
                .map(|(p, _)| *p)
                .collect();
            if members.is_empty() {
                continue;
            }
            let mx = members.iter().map(|p| p.x).sum::<f64>() / members.len() as f64;
            let my = members.iter().map(|p| p.y).sum::<f64>() / members.len() as f64;
            assert!((c.centroids[g].x - mx).abs() <= 1e-9 * (1.0 + mx.abs()));
            assert!((c.centroids[g].y - my).abs() <= 1e-9 * (1.0 + my.abs()));
        }
    }

    #[test]
    fn empty_cluster_keeps_previous_centroid() {
        // Both points sit next to the first centroid; the second cluster
        // stays empty and its centroid must not move.
        let pts = vec![Point::new(0.0, 0.0), Point::new(0.1, 0.0)];
        let init = vec![Point::new(0.0, 0.0), Point::new(100.0, 100.0)];
        let c = kmeans_cluster(&pts, 2, &init, 50, 1e-12).unwrap();
        assert_eq!(c.membership, vec![0, 0]);
        assert_eq!(c.centroids[1], Point::new(100.0, 100.0));
    }

    #[test]
    fn rejects_more_clusters_than_points() {
        let pts = vec![Point::new(0.0, 0.0)];
        let init = vec![Point::new(0.0, 0.0), Point::new(1.0, 1.0)];
        assert!(matches!(
            kmeans_cluster(&pts, 2, &init, 10, 1e-9),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn separated_groups_match_nearest_depot_assignment() {
        let inst = crate::instance::Instance::new(
            vec![Point::new(0.0, 0.0), Point::new(20.0, 0.0)],
            vec![
                Point::new(0.5, 1.0),
                Point::new(-1.0, 0.5),
                Point::new(19.0, 1.0),
                Point::new(21.0, -0.5),
                Point::new(0.0, -1.5),
            ],
        )
        .unwrap();
        let d = DistanceMatrix::build(&inst).unwrap();
        let owner = kmeans_initial_assignment(&inst, &d).unwrap();
        let nearest = crate::allocator::initial_assignment(&inst, &d).unwrap();
        assert_eq!(owner, nearest);
    }

    #[test]
    fn single_agent_gets_every_task() {
        let inst = generate(1, 9, Region::default(), 3).unwrap();
        let d = DistanceMatrix::build(&inst).unwrap();
        let owner = kmeans_initial_assignment(&inst, &d).unwrap();
        assert!(owner.iter().all(|&g| g == 0));
    }

    #[test]
    fn assignment_integrity_on_random_instance() {
        let inst = generate(3, 15, Region::default(), 13).unwrap();
        let d = DistanceMatrix::build(&inst).unwrap();
        let owner = kmeans_initial_assignment(&inst, &d).unwrap();
        assert_eq!(owner.len(), 15);
        for g in 0..3 {
            assert!(owner.contains(&g), "agent {g} owns nothing");
        }
        assert!(owner.iter().all(|&g| g < 3));
    }

    #[test]
    fn empty_agent_is_repaired_with_nearest_task() {
        // Tasks hug depot 0; k-means leaves depot 1's cluster empty, so
        // repair must hand it the task nearest to depot 1.
        let inst = crate::instance::Instance::new(
            vec![Point::new(0.0, 0.0), Point::new(10.0, 0.0)],
            vec![
                Point::new(0.0, 1.0),
                Point::new(1.0, 0.0),
                Point::new(0.0, -1.0),
                Point::new(2.0, 0.0),
            ],
        )
        .unwrap();
        let d = DistanceMatrix::build(&inst).unwrap();
        let owner = kmeans_initial_assignment(&inst, &d).unwrap();
        assert_eq!(owner, vec![0, 0, 0, 1]);
    }

    #[test]
    fn update_step_beats_perturbed_centroids() {
        let inst = generate(2, 10, Region::default(), 31).unwrap();
        let init: Vec<Point> = inst.tasks[..2].to_vec();
        let c = kmeans_cluster(&inst.tasks, 2, &init, 100, 0.0).unwrap();
        let contribution = |g: usize, mu: Point| -> f64 {
            inst.tasks
                .iter()
                .zip(&c.membership)
                .filter(|(_, &m)| m == g)
                .map(|(p, _)| squared_dist(*p, mu))
                .sum()
        };
        for g in 0..2 {
            let base = contribution(g, c.centroids[g]);
            for (dx, dy) in [(0.05, 0.0), (-0.03, 0.07), (0.0, -0.11), (0.2, 0.2)] {
                let perturbed = Point::new(c.centroids[g].x + dx, c.centroids[g].y + dy);
                assert!(contribution(g, perturbed) >= base - 1e-12);
            }
        }
    }
}
