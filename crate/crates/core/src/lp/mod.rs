//! Dense linear programming.
//!
//! [`solve`] runs a two-phase simplex on a dense tableau. Pricing is Dantzig
//! (most negative reduced cost) until the solver has made `2(m+n)` consecutive
//! pivots without improving the objective, after which Bland's rule takes over
//! for the rest of the phase so degenerate cycling cannot occur. Phase one
//! uses a single shared artificial column for all inequality rows whose
//! slack basis is infeasible, plus one per equality row.
//!
//! [`enumerate_vertices_oracle`] solves the same problems by brute force over
//! all basic solutions and exists to cross-check the simplex in tests.

mod oracle;
mod simplex;

pub use oracle::{enumerate_vertices_oracle, ORACLE_MAX_CONSTRAINTS, ORACLE_MAX_VARIABLES};
pub use simplex::solve;

use thiserror::Error;

/// Primal feasibility tolerance.
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Smallest magnitude accepted as a pivot element.
pub const PIVOT_TOL: f64 = 1e-10;
/// Reduced costs above `-OPTIMALITY_TOL` are treated as nonnegative.
pub const OPTIMALITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    LessEq,
    Equal,
    GreaterEq,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("malformed linear program: {0}")]
    Malformed(String),
    #[error("numerically singular: {0}")]
    NumericallySingular(String),
    #[error("problem too large for vertex enumeration ({vars} variables, {rows} constraints)")]
    OracleLimit { vars: usize, rows: usize },
}

/// A dense linear program
///
/// ```text
/// min/max  c · x
/// s.t.     A x  {<=, =, >=}  b
///          x >= lower
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    /// Row-major constraint matrix, one `Vec` per row.
    pub matrix: Vec<Vec<f64>>,
    pub relations: Vec<Relation>,
    pub rhs: Vec<f64>,
    pub lower_bounds: Vec<f64>,
}

impl LinearProgram {
    /// Builds a program with nonnegativity bounds on every variable.
    pub fn new(
        sense: Sense,
        objective: Vec<f64>,
        matrix: Vec<Vec<f64>>,
        relations: Vec<Relation>,
        rhs: Vec<f64>,
    ) -> Self {
        let n = objective.len();
        LinearProgram {
            sense,
            objective,
            matrix,
            relations,
            rhs,
            lower_bounds: vec![0.0; n],
        }
    }

    pub fn with_lower_bounds(mut self, lower_bounds: Vec<f64>) -> Self {
        self.lower_bounds = lower_bounds;
        self
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rhs.len()
    }

    /// Checks the shape and finiteness invariants.
    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.objective.len();
        let m = self.rhs.len();
        if n == 0 {
            return Err(LpError::Malformed("no variables".into()));
        }
        if m == 0 {
            return Err(LpError::Malformed("no constraints".into()));
        }
        if self.matrix.len() != m {
            return Err(LpError::Malformed(format!(
                "{} matrix rows but {} right-hand sides",
                self.matrix.len(),
                m
            )));
        }
        if self.relations.len() != m {
            return Err(LpError::Malformed(format!(
                "{} relations but {} right-hand sides",
                self.relations.len(),
                m
            )));
        }
        if self.lower_bounds.len() != n {
            return Err(LpError::Malformed(format!(
                "{} lower bounds for {} variables",
                self.lower_bounds.len(),
                n
            )));
        }
        for (i, row) in self.matrix.iter().enumerate() {
            if row.len() != n {
                return Err(LpError::Malformed(format!(
                    "row {i} has {} coefficients, expected {n}",
                    row.len()
                )));
            }
        }
        let all_finite = self
            .objective
            .iter()
            .chain(self.matrix.iter().flatten())
            .chain(&self.rhs)
            .chain(&self.lower_bounds)
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(LpError::Malformed("non-finite coefficient".into()));
        }
        Ok(())
    }

    /// `c · x`
    pub fn objective_at(&self, x: &[f64]) -> f64 {
        dot(&self.objective, x)
    }

    /// Largest constraint or bound violation at `x`, scaled per row by the
    /// magnitude of the terms involved.
    pub fn max_scaled_violation(&self, x: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for ((row, rel), &b) in self.matrix.iter().zip(&self.relations).zip(&self.rhs) {
            let lhs = dot(row, x);
            let scale = 1.0
                + b.abs()
                + row.iter().zip(x).map(|(a, v)| (a * v).abs()).sum::<f64>();
            let v = match rel {
                Relation::LessEq => lhs - b,
                Relation::GreaterEq => b - lhs,
                Relation::Equal => (lhs - b).abs(),
            };
            worst = worst.max(v / scale);
        }
        for (&xj, &lb) in x.iter().zip(&self.lower_bounds) {
            worst = worst.max((lb - xj) / (1.0 + lb.abs()));
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Meaningful only when `status` is [`LpStatus::Optimal`].
    pub objective_value: f64,
    /// Empty unless `status` is [`LpStatus::Optimal`].
    pub primal: Vec<f64>,
}

impl LpSolution {
    pub fn optimal(objective_value: f64, primal: Vec<f64>) -> Self {
        LpSolution {
            status: LpStatus::Optimal,
            objective_value,
            primal,
        }
    }

    pub fn infeasible() -> Self {
        LpSolution {
            status: LpStatus::Infeasible,
            objective_value: f64::NAN,
            primal: Vec::new(),
        }
    }

    pub fn unbounded() -> Self {
        LpSolution {
            status: LpStatus::Unbounded,
            objective_value: f64::NAN,
            primal: Vec::new(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
