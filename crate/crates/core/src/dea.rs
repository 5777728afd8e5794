//! CCR efficiency of objective vectors.
//!
//! Each objective vector is a decision-making unit whose objectives are
//! inputs and whose single output is the constant 1. The output weight is
//! then pinned to 1 by normalization and the multiplier model for unit `o`
//! reduces to
//!
//! ```text
//! theta_o = min  v · x_o
//!           s.t. v · x_j >= 1   for every unit j
//!                v >= 0
//! ```
//!
//! `theta_o = 1` exactly when `x_o` lies on the lower-left boundary of the
//! convex hull of the units extended by the positive orthant.
//!
//! [`efficiency_scores`] evaluates `theta_o` through the LP dual of that
//! program (see [`build_ccr_envelopment`]), which has one row per objective
//! and a feasible slack basis, so it needs no phase one. The multiplier form
//! from [`build_ccr`] gives the same optimum and is kept for cross-checking.

use thiserror::Error;

use crate::lp::{self, LinearProgram, LpError, LpStatus, Relation, Sense};
use crate::pareto::non_dominated_filter;

pub const DEFAULT_EPSILON_SHIFT: f64 = 0.1;
pub const DEFAULT_EFF_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DeaError {
    #[error("empty set of decision-making units")]
    Empty,
    #[error("unit {0} has {1} coordinates, expected {2}")]
    Ragged(usize, usize, usize),
    #[error("unit {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("unit index {0} out of range for {1} units")]
    IndexOutOfRange(usize, usize),
    #[error("efficiency LP for unit {index} failed: {source}")]
    Lp {
        index: usize,
        #[source]
        source: LpError,
    },
    #[error("efficiency LP for unit {index} ended {status:?}")]
    UnexpectedStatus { index: usize, status: LpStatus },
}

/// Objective vectors translated so every coordinate is at least
/// `epsilon_shift`.
#[derive(Debug, Clone, PartialEq)]
pub struct DmuSet {
    raw: Vec<Vec<f64>>,
    shift: Vec<f64>,
    shifted: Vec<Vec<f64>>,
}

impl DmuSet {
    pub fn raw_points(&self) -> &[Vec<f64>] {
        &self.raw
    }

    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    pub fn shifted_points(&self) -> &[Vec<f64>] {
        &self.shifted
    }

    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }

    /// Units used directly as DEA inputs, with no further translation.
    pub fn from_positive(points: Vec<Vec<f64>>) -> Result<Self, DeaError> {
        check_points(&points)?;
        let k = points[0].len();
        Ok(DmuSet {
            shifted: points.clone(),
            raw: points,
            shift: vec![0.0; k],
        })
    }
}

fn check_points(points: &[Vec<f64>]) -> Result<(), DeaError> {
    let first = points.first().ok_or(DeaError::Empty)?;
    let k = first.len();
    if k == 0 {
        return Err(DeaError::Ragged(0, 0, 1));
    }
    for (j, p) in points.iter().enumerate() {
        if p.len() != k {
            return Err(DeaError::Ragged(j, p.len(), k));
        }
        if p.iter().any(|v| !v.is_finite()) {
            return Err(DeaError::NonFinite(j));
        }
    }
    Ok(())
}

/// `shift[i] = max(0, epsilon_shift - min_j raw[j][i])`.
pub fn shift_to_positive(raw_points: &[Vec<f64>], epsilon_shift: f64) -> Result<DmuSet, DeaError> {
    check_points(raw_points)?;
    let k = raw_points[0].len();
    let shift: Vec<f64> = (0..k)
        .map(|i| {
            let lo = raw_points.iter().map(|p| p[i]).fold(f64::INFINITY, f64::min);
            (epsilon_shift - lo).max(0.0)
        })
        .collect();
    let shifted = raw_points
        .iter()
        .map(|p| p.iter().zip(&shift).map(|(v, s)| v + s).collect())
        .collect();
    Ok(DmuSet {
        raw: raw_points.to_vec(),
        shift,
        shifted,
    })
}

/// The multiplier program for unit `o` against every unit of the set:
/// `k` variables, one `>= 1` row per unit.
pub fn build_ccr(dmus: &DmuSet, o: usize) -> Result<LinearProgram, DeaError> {
    if o >= dmus.len() {
        return Err(DeaError::IndexOutOfRange(o, dmus.len()));
    }
    let x = &dmus.shifted;
    Ok(LinearProgram::new(
        Sense::Minimize,
        x[o].clone(),
        x.clone(),
        vec![Relation::GreaterEq; x.len()],
        vec![1.0; x.len()],
    ))
}

/// Dual of [`build_ccr`] restricted to the units in `peers`:
///
/// ```text
/// max  sum_j lambda_j
/// s.t. sum_j lambda_j x_j <= x_o,   lambda >= 0
/// ```
pub fn build_ccr_envelopment(
    dmus: &DmuSet,
    o: usize,
    peers: &[usize],
) -> Result<LinearProgram, DeaError> {
    if o >= dmus.len() {
        return Err(DeaError::IndexOutOfRange(o, dmus.len()));
    }
    if let Some(&j) = peers.iter().find(|&&j| j >= dmus.len()) {
        return Err(DeaError::IndexOutOfRange(j, dmus.len()));
    }
    let x = &dmus.shifted;
    let k = x[o].len();
    Ok(LinearProgram::new(
        Sense::Maximize,
        vec![1.0; peers.len()],
        (0..k).map(|i| peers.iter().map(|&j| x[j][i]).collect()).collect(),
        vec![Relation::LessEq; k],
        x[o].clone(),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyReport {
    pub theta: Vec<f64>,
    /// `1 / theta`, in `(0, 1]`.
    pub score: Vec<f64>,
    pub efficient: Vec<bool>,
}

impl EfficiencyReport {
    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }
}

/// Shifts the set once, then solves one efficiency program per unit.
pub fn efficiency_scores(
    raw_points: &[Vec<f64>],
    epsilon_shift: f64,
    eff_tol: f64,
) -> Result<EfficiencyReport, DeaError> {
    let dmus = shift_to_positive(raw_points, epsilon_shift)?;
    evaluate_set(&dmus, eff_tol)
}

/// Units whose constraints are not implied by the others.
///
/// With `v >= 0`, the row of a unit that is componentwise `>=` another, or
/// that lies on or above a segment between two others, follows from theirs.
/// In two dimensions that leaves the vertices of the lower-left convex hull
/// boundary; in higher dimensions the non-dominated units are kept. One
/// representative is kept per group of identical units.
pub fn supporting_units(points: &[Vec<f64>]) -> Vec<usize> {
    let mut peers = non_dominated_filter(points);
    let mut seen: Vec<&Vec<f64>> = Vec::with_capacity(peers.len());
    peers.retain(|&j| {
        let p = &points[j];
        if seen.contains(&p) {
            false
        } else {
            seen.push(p);
            true
        }
    });
    if points[0].len() != 2 || peers.len() <= 2 {
        return peers;
    }
    // Non-dominated in 2-D: ascending f1 means descending f2.
    peers.sort_by(|&a, &b| points[a][0].total_cmp(&points[b][0]));
    let cross = |o: &[f64], a: &[f64], b: &[f64]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut hull: Vec<usize> = Vec::with_capacity(peers.len());
    for j in peers {
        while hull.len() >= 2
            && cross(&points[hull[hull.len() - 2]], &points[hull[hull.len() - 1]], &points[j]) <= 0.0
        {
            hull.pop();
        }
        hull.push(j);
    }
    hull
}

/// Efficiency of every unit in an already-positive set.
pub fn evaluate_set(dmus: &DmuSet, eff_tol: f64) -> Result<EfficiencyReport, DeaError> {
    let peers = supporting_units(&dmus.shifted);
    let n = dmus.len();
    let mut theta = Vec::with_capacity(n);
    for o in 0..n {
        let lp = build_ccr_envelopment(dmus, o, &peers)?;
        let sol = lp::solve(&lp).map_err(|source| DeaError::Lp { index: o, source })?;
        if sol.status != LpStatus::Optimal {
            return Err(DeaError::UnexpectedStatus {
                index: o,
                status: sol.status,
            });
        }
        let t = sol.objective_value;
        if t < 1.0 - eff_tol {
            return Err(DeaError::Lp {
                index: o,
                source: LpError::NumericallySingular(format!("efficiency optimum {t} below 1")),
            });
        }
        // theta >= 1 holds exactly; anything below is rounding.
        theta.push(t.max(1.0));
    }
    let score = theta.iter().map(|t| 1.0 / t).collect();
    let efficient = theta.iter().map(|t| *t <= 1.0 + eff_tol).collect();
    Ok(EfficiencyReport {
        theta,
        score,
        efficient,
    })
}
