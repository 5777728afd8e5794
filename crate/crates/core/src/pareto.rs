//! Pareto dominance, frontier filtering and frontier-quality metrics.
//!
//! All objectives are minimized. A point `a` dominates `b` when it is no worse
//! in every coordinate and differs from `b` (hence is strictly better in at
//! least one).

use thiserror::Error;

use crate::problem::ProblemSpec;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParetoError {
    #[error("objective vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("{0} must not be empty")]
    Empty(&'static str),
    #[error("reference front needs at least 10 grid points per dimension, got {0}")]
    GridTooCoarse(usize),
    #[error("reference front supports at most 3 decision variables, problem has {0}")]
    TooManyVariables(usize),
    #[error("no feasible grid point found for problem {0}")]
    NoFeasiblePoint(String),
}

/// Pareto dominance for minimization.
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool, ParetoError> {
    if a.len() != b.len() {
        return Err(ParetoError::LengthMismatch(a.len(), b.len()));
    }
    Ok(dominates_unchecked(a, b))
}

pub(crate) fn dominates_unchecked(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strict = true;
        }
    }
    strict
}

/// Indices (ascending) of the points not dominated by any other point.
///
/// Equal points never dominate each other, so duplicates are all kept.
/// Two-objective input uses an `O(N log N)` sweep; anything else falls back to
/// [`non_dominated_pairwise`].
pub fn non_dominated_filter(points: &[Vec<f64>]) -> Vec<usize> {
    if !points.is_empty() && points.iter().all(|p| p.len() == 2) {
        non_dominated_sweep_2d(points)
    } else {
        non_dominated_pairwise(points)
    }
}

/// `O(N^2)` reference implementation of [`non_dominated_filter`].
pub fn non_dominated_pairwise(points: &[Vec<f64>]) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| {
            !points
                .iter()
                .enumerate()
                .any(|(j, q)| j != i && dominates_unchecked(q, &points[i]))
        })
        .collect()
}

fn non_dominated_sweep_2d(points: &[Vec<f64>]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[a][0]
            .total_cmp(&points[b][0])
            .then(points[a][1].total_cmp(&points[b][1]))
    });
    let mut keep = Vec::new();
    // Smallest f2 among points with strictly smaller f1.
    let mut best_f2 = f64::INFINITY;
    let mut start = 0;
    while start < order.len() {
        let f1 = points[order[start]][0];
        let mut end = start;
        while end < order.len() && points[order[end]][0] == f1 {
            end += 1;
        }
        // Sorted, so the group minimum comes first.
        let group_min = points[order[start]][1];
        if group_min < best_f2 {
            keep.extend(
                order[start..end]
                    .iter()
                    .copied()
                    .filter(|&i| points[i][1] == group_min),
            );
            best_f2 = group_min;
        }
        start = end;
    }
    keep.sort_unstable();
    keep
}

/// A point kept by the archive together with where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ArchivedPoint {
    pub x: Vec<f64>,
    pub f: Vec<f64>,
    pub efficiency: f64,
    pub iteration: usize,
}

/// Accumulated efficient points; mutually non-dominated after every
/// [`ParetoArchive::filter`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParetoArchive {
    points: Vec<ArchivedPoint>,
    capacity: Option<usize>,
}

impl ParetoArchive {
    pub fn new(capacity: Option<usize>) -> Self {
        ParetoArchive {
            points: Vec::new(),
            capacity,
        }
    }

    /// Adds a point unless one with the same decision vector is already held.
    pub fn insert(&mut self, point: ArchivedPoint) -> bool {
        if self.points.iter().any(|p| p.x == point.x) {
            return false;
        }
        self.points.push(point);
        true
    }

    pub fn clear(&mut self) {
        self.points.clear();
    }

    /// Drops dominated points, then trims to capacity by farthest-point
    /// selection in objective space. Survivors keep their insertion order.
    pub fn filter(&mut self) {
        let objectives = self.objectives();
        let mut keep = non_dominated_filter(&objectives);
        if let Some(cap) = self.capacity {
            if keep.len() > cap {
                let subset: Vec<Vec<f64>> = keep.iter().map(|&i| objectives[i].clone()).collect();
                keep = farthest_point_subset(&subset, cap)
                    .into_iter()
                    .map(|i| keep[i])
                    .collect();
            }
        }
        let mut idx = keep.into_iter().peekable();
        let mut i = 0;
        self.points.retain(|_| {
            let hit = idx.peek() == Some(&i);
            if hit {
                idx.next();
            }
            i += 1;
            hit
        });
    }

    pub fn points(&self) -> &[ArchivedPoint] {
        &self.points
    }

    pub fn objectives(&self) -> Vec<Vec<f64>> {
        self.points.iter().map(|p| p.f.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn into_points(self) -> Vec<ArchivedPoint> {
        self.points
    }
}

/// Greedy max-min-distance subset of size `keep`, seeded with the point of
/// smallest first coordinate. Returned indices are ascending.
pub fn farthest_point_subset(points: &[Vec<f64>], keep: usize) -> Vec<usize> {
    if keep >= points.len() {
        return (0..points.len()).collect();
    }
    if keep == 0 {
        return Vec::new();
    }
    let seed = (0..points.len())
        .min_by(|&a, &b| points[a][0].total_cmp(&points[b][0]).then(a.cmp(&b)))
        .unwrap();
    let mut chosen = vec![seed];
    let mut nearest: Vec<f64> = points.iter().map(|p| euclidean(p, &points[seed])).collect();
    while chosen.len() < keep {
        let mut best: Option<(usize, f64)> = None;
        for (i, &d) in nearest.iter().enumerate() {
            if chosen.contains(&i) {
                continue;
            }
            if best.is_none_or(|(_, bd)| d > bd) {
                best = Some((i, d));
            }
        }
        let (next, _) = best.unwrap();
        chosen.push(next);
        for (i, p) in points.iter().enumerate() {
            nearest[i] = nearest[i].min(euclidean(p, &points[next]));
        }
    }
    chosen.sort_unstable();
    chosen
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Brute-force Pareto front: objectives on a uniform grid over the problem's
/// bounds, restricted to feasible points and filtered for dominance.
pub fn reference_front(
    problem: &ProblemSpec,
    grid_points_per_dim: usize,
) -> Result<Vec<Vec<f64>>, ParetoError> {
    let n = problem.n_var();
    if n > 3 {
        return Err(ParetoError::TooManyVariables(n));
    }
    if grid_points_per_dim < 10 {
        return Err(ParetoError::GridTooCoarse(grid_points_per_dim));
    }
    let g = grid_points_per_dim;
    let axes: Vec<Vec<f64>> = (0..n)
        .map(|d| {
            let (lo, hi) = (problem.lower_bound()[d], problem.upper_bound()[d]);
            (0..g)
                .map(|i| {
                    if i == g - 1 {
                        hi
                    } else {
                        lo + (hi - lo) * i as f64 / (g - 1) as f64
                    }
                })
                .collect()
        })
        .collect();

    let total = g.pow(n as u32);
    let mut objectives = Vec::new();
    let mut x = vec![0.0; n];
    for flat in 0..total {
        let mut rem = flat;
        for d in (0..n).rev() {
            x[d] = axes[d][rem % g];
            rem /= g;
        }
        if problem.is_feasible(&x).feasible {
            objectives.push(problem.evaluate_unchecked(&x));
        }
    }
    if objectives.is_empty() {
        return Err(ParetoError::NoFeasiblePoint(problem.name().to_string()));
    }
    let keep = non_dominated_filter(&objectives);
    let mut front: Vec<Vec<f64>> = keep.into_iter().map(|i| objectives[i].clone()).collect();
    front.sort_by(|a, b| lexicographic(a, b));
    front.dedup();
    Ok(front)
}

pub(crate) fn lexicographic(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// Distance from each front member to its nearest reference member.
pub fn nearest_distances(
    front: &[Vec<f64>],
    reference: &[Vec<f64>],
) -> Result<Vec<f64>, ParetoError> {
    if front.is_empty() {
        return Err(ParetoError::Empty("front"));
    }
    if reference.is_empty() {
        return Err(ParetoError::Empty("reference"));
    }
    Ok(front
        .iter()
        .map(|p| {
            reference
                .iter()
                .map(|r| euclidean(p, r))
                .fold(f64::INFINITY, f64::min)
        })
        .collect())
}

/// Mean distance from the front to the reference set.
pub fn generational_distance(
    front: &[Vec<f64>],
    reference: &[Vec<f64>],
) -> Result<f64, ParetoError> {
    let d = nearest_distances(front, reference)?;
    Ok(d.iter().sum::<f64>() / d.len() as f64)
}

/// Area dominated by `front` inside the box bounded by `ref_point`.
///
/// Members not componentwise `<= ref_point` contribute nothing.
pub fn hypervolume_2d(front: &[Vec<f64>], ref_point: [f64; 2]) -> f64 {
    let mut pts: Vec<[f64; 2]> = front
        .iter()
        .filter(|p| p[0] <= ref_point[0] && p[1] <= ref_point[1])
        .map(|p| [p[0], p[1]])
        .collect();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut area = 0.0;
    let mut ceiling = ref_point[1];
    for p in pts {
        if p[1] < ceiling {
            area += (ref_point[0] - p[0]) * (ceiling - p[1]);
            ceiling = p[1];
        }
    }
    area
}

/// Componentwise maximum of `front` pushed out by `margin` times its range.
pub fn hypervolume_reference_point(front: &[Vec<f64>], margin: f64) -> [f64; 2] {
    let mut out = [0.0; 2];
    for (d, o) in out.iter_mut().enumerate() {
        let hi = front.iter().map(|p| p[d]).fold(f64::NEG_INFINITY, f64::max);
        let lo = front.iter().map(|p| p[d]).fold(f64::INFINITY, f64::min);
        let range = hi - lo;
        *o = if range > 0.0 {
            hi + margin * range
        } else {
            hi + margin * hi.abs().max(1.0)
        };
    }
    out
}

/// Population standard deviation of nearest-neighbour distances within the
/// front; zero for fronts of two or fewer points.
pub fn spacing(front: &[Vec<f64>]) -> f64 {
    if front.len() <= 2 {
        return 0.0;
    }
    let d: Vec<f64> = front
        .iter()
        .enumerate()
        .map(|(i, p)| {
            front
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, q)| euclidean(p, q))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let mean = d.iter().sum::<f64>() / d.len() as f64;
    (d.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / d.len() as f64).sqrt()
}
