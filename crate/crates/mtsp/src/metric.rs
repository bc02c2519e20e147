//! Dense pairwise distance table over depots and tasks.
//!
//! Global index convention: `[0, k)` are depots in instance order,
//! `[k, k+n)` are tasks in instance order. Every later geometric
//! computation reduces to constant-time lookups into this table.

use crate::error::{Error, Result};
use crate::instance::{Instance, Point};

/// Default cap on matrix memory, in bytes.
pub const DEFAULT_BUDGET_BYTES: u64 = 8_000_000_000;

/// Distance metric selector. Only the Euclidean plane metric is
/// implemented; `AStar` names the obstacle-aware variant as an extension
/// seam and is rejected at build time.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Metric {
    #[default]
    Euclidean,
    AStar,
}

/// Euclidean distance, evaluated as `sqrt(dx*dx + dy*dy)` in that order
/// so matrix entries are bit-identical to direct recomputation.
#[inline]
pub fn euclidean(a: Point, b: Point) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    (dx * dx + dy * dy).sqrt()
}

/// Symmetric `(k+n) x (k+n)` distance table with zero diagonal.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    size: usize,
    depot_count: usize,
    values: Vec<f64>,
}

impl DistanceMatrix {
    /// Build the Euclidean matrix under the default memory budget.
    pub fn build(inst: &Instance) -> Result<Self> {
        Self::build_with(inst, Metric::Euclidean, DEFAULT_BUDGET_BYTES)
    }

    pub fn build_with(inst: &Instance, metric: Metric, budget_bytes: u64) -> Result<Self> {
        inst.validate()?;
        if metric == Metric::AStar {
            return Err(Error::InvalidInput(
                "A* metric is not implemented; use Euclidean".to_string(),
            ));
        }
        let size = inst.k + inst.n;
        let bytes = (size as u64)
            .checked_mul(size as u64)
            .and_then(|cells| cells.checked_mul(std::mem::size_of::<f64>() as u64))
            .ok_or_else(|| Error::Capacity("distance matrix size overflows".to_string()))?;
        if bytes > budget_bytes {
            return Err(Error::Capacity(format!(
                "distance matrix needs {bytes} bytes, budget is {budget_bytes}"
            )));
        }

        let points: Vec<Point> = inst
            .depots
            .iter()
            .chain(inst.tasks.iter())
            .copied()
            .collect();
        let mut values = vec![0.0; size * size];
        for i in 0..size {
            for j in (i + 1)..size {
                let d = euclidean(points[i], points[j]);
                values[i * size + j] = d;
                values[j * size + i] = d;
            }
        }
        Ok(Self {
            size,
            depot_count: inst.k,
            values,
        })
    }

    /// Number of indexed points, `k + n`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn depot_count(&self) -> usize {
        self.depot_count
    }

    /// Global index of task `i` (tasks follow the k depots).
    #[inline]
    pub fn task(&self, i: usize) -> usize {
        self.depot_count + i
    }

    /// Distance between two global indices. Panics on out-of-range
    /// indices; that is a caller bug, not a recoverable input error.
    #[inline]
    pub fn dist(&self, a: usize, b: usize) -> f64 {
        debug_assert!(a < self.size && b < self.size);
        self.values[a * self.size + b]
    }
}
