//! Constrained multi-objective minimization problems and the four built-in
//! bi-objective test problems.

pub mod expr;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use expr::{Expr, ExprError};

/// Constraint values at or below this are satisfied.
pub const CONSTRAINT_TOL: f64 = 1e-9;

pub type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    #[error("unknown builtin problem {0} (expected 1-4)")]
    UnknownBuiltin(String),
    #[error("point has {got} coordinates, problem {problem} has {expected} variables")]
    Dimension {
        problem: String,
        expected: usize,
        got: usize,
    },
    #[error("coordinate {index} = {value} outside [{lower}, {upper}] for problem {problem}")]
    OutOfBounds {
        problem: String,
        index: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },
    #[error("invalid bounds: {0}")]
    InvalidBounds(String),
    #[error("invalid problem definition: {0}")]
    Invalid(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Result of a feasibility test: per-constraint `max(0, g_i(x))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Feasibility {
    pub feasible: bool,
    pub violation: Vec<f64>,
}

/// Minimize `f(x)` subject to `g(x) <= 0` and `lower <= x <= upper`.
#[derive(Clone)]
pub struct ProblemSpec {
    name: String,
    objectives: Vec<ScalarFn>,
    constraints: Vec<ScalarFn>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("objectives", &self.objectives.len())
            .field("constraints", &self.constraints.len())
            .field("lower", &self.lower)
            .field("upper", &self.upper)
            .finish()
    }
}

impl ProblemSpec {
    pub fn new(
        name: impl Into<String>,
        objectives: Vec<ScalarFn>,
        constraints: Vec<ScalarFn>,
        lower: Vec<f64>,
        upper: Vec<f64>,
    ) -> Result<Self, ProblemError> {
        let name = name.into();
        if objectives.len() < 2 {
            return Err(ProblemError::Invalid(format!(
                "{name}: at least two objectives required"
            )));
        }
        check_bounds(&lower, &upper)?;
        Ok(ProblemSpec {
            name,
            objectives,
            constraints,
            lower,
            upper,
        })
    }

    /// Builds a problem from expression strings. Constraints may be written
    /// as `lhs <= rhs`, `lhs >= rhs` or a bare expression meaning `expr <= 0`.
    pub fn from_expressions(
        name: impl Into<String>,
        objectives: &[&str],
        constraints: &[&str],
        lower: Vec<f64>,
        upper: Vec<f64>,
    ) -> Result<Self, ProblemError> {
        let n = lower.len();
        let objectives = objectives
            .iter()
            .map(|s| Expr::parse(s, n).map(expr_fn))
            .collect::<Result<Vec<_>, _>>()?;
        let constraints = constraints
            .iter()
            .map(|s| parse_constraint(s, n))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(name, objectives, constraints, lower, upper)
    }

    pub fn with_bounds(mut self, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, ProblemError> {
        if lower.len() != self.n_var() || upper.len() != self.n_var() {
            return Err(ProblemError::InvalidBounds(format!(
                "{} expects {} bounds per side",
                self.name,
                self.n_var()
            )));
        }
        check_bounds(&lower, &upper)?;
        self.lower = lower;
        self.upper = upper;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_var(&self) -> usize {
        self.lower.len()
    }

    pub fn n_objectives(&self) -> usize {
        self.objectives.len()
    }

    pub fn n_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn lower_bound(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper_bound(&self) -> &[f64] {
        &self.upper
    }

    pub fn in_bounds(&self, x: &[f64]) -> bool {
        x.len() == self.n_var()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| v >= lo && v <= hi)
    }

    /// Objective vector at `x`; rejects points outside the bounds.
    pub fn evaluate_objectives(&self, x: &[f64]) -> Result<Vec<f64>, ProblemError> {
        if x.len() != self.n_var() {
            return Err(ProblemError::Dimension {
                problem: self.name.clone(),
                expected: self.n_var(),
                got: x.len(),
            });
        }
        for (i, &v) in x.iter().enumerate() {
            if !(v >= self.lower[i] && v <= self.upper[i]) {
                return Err(ProblemError::OutOfBounds {
                    problem: self.name.clone(),
                    index: i,
                    value: v,
                    lower: self.lower[i],
                    upper: self.upper[i],
                });
            }
        }
        Ok(self.evaluate_unchecked(x))
    }

    pub(crate) fn evaluate_unchecked(&self, x: &[f64]) -> Vec<f64> {
        self.objectives.iter().map(|f| f(x)).collect()
    }

    pub fn constraint_values(&self, x: &[f64]) -> Vec<f64> {
        self.constraints.iter().map(|g| g(x)).collect()
    }

    pub fn is_feasible(&self, x: &[f64]) -> Feasibility {
        let violation: Vec<f64> = self
            .constraint_values(x)
            .into_iter()
            .map(|g| if g.is_nan() { f64::INFINITY } else { g.max(0.0) })
            .collect();
        let feasible = self.in_bounds(x) && violation.iter().all(|v| *v <= CONSTRAINT_TOL);
        Feasibility {
            feasible,
            violation,
        }
    }
}

fn check_bounds(lower: &[f64], upper: &[f64]) -> Result<(), ProblemError> {
    if lower.is_empty() {
        return Err(ProblemError::InvalidBounds("no decision variables".into()));
    }
    if lower.len() != upper.len() {
        return Err(ProblemError::InvalidBounds(format!(
            "{} lower bounds but {} upper bounds",
            lower.len(),
            upper.len()
        )));
    }
    for (i, (lo, hi)) in lower.iter().zip(upper).enumerate() {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(ProblemError::InvalidBounds(format!("x{} bound not finite", i + 1)));
        }
        if lo > hi {
            return Err(ProblemError::InvalidBounds(format!(
                "x{}: lower {lo} exceeds upper {hi}",
                i + 1
            )));
        }
    }
    Ok(())
}

fn expr_fn(e: Expr) -> ScalarFn {
    Arc::new(move |x: &[f64]| e.eval(x))
}

fn parse_constraint(src: &str, n_var: usize) -> Result<ScalarFn, ProblemError> {
    for (op, flip) in [("<=", false), ("≤", false), (">=", true), ("≥", true)] {
        if let Some((lhs, rhs)) = src.split_once(op) {
            let l = Expr::parse(lhs, n_var)?;
            let r = Expr::parse(rhs, n_var)?;
            let g = if flip {
                Expr::Sub(Box::new(r), Box::new(l))
            } else {
                Expr::Sub(Box::new(l), Box::new(r))
            };
            return Ok(expr_fn(g));
        }
    }
    Ok(expr_fn(Expr::parse(src, n_var)?))
}

pub const BUILTIN_IDS: [u32; 4] = [1, 2, 3, 4];

/// The four built-in test problems, formulas as tabulated, with default
/// bounds P1 `[0,5]x[0,3]`, P2 `[0,1]^2`, P3 `[-20,20]^2`,
/// P4 `[0.1,1]x[0,5]`.
pub fn builtin(id: u32) -> Result<ProblemSpec, ProblemError> {
    let f = |g: fn(&[f64]) -> f64| -> ScalarFn { Arc::new(g) };
    match id {
        1 => ProblemSpec::new(
            "problem1",
            vec![
                f(|x| 4.0 * x[0] + 4.0 * x[1]),
                f(|x| (x[0] - 5.0).powi(2) + (x[1] - 5.0).powi(2)),
            ],
            vec![f(|x| (x[0] - 5.0).powi(2) + x[1].powi(2) - 25.0)],
            vec![0.0, 0.0],
            vec![5.0, 3.0],
        ),
        2 => ProblemSpec::new(
            "problem2",
            vec![f(|x| 2.0 * x[0] - x[1]), f(|x| -x[0])],
            vec![f(|x| (x[0] - 1.0).powi(3) + x[1])],
            vec![0.0, 0.0],
            vec![1.0, 1.0],
        ),
        3 => ProblemSpec::new(
            "problem3",
            vec![
                f(|x| (x[0] - 2.0).powi(2) + 2.0 + (x[1] - 1.0).powi(2) + 2.0),
                f(|x| 9.0 * x[0] + (x[1] - 1.0).powi(2)),
            ],
            vec![
                f(|x| x[0].powi(2) + x[1].powi(2) - 225.0),
                f(|x| x[0] + 3.0 * x[1] + 10.0),
            ],
            vec![-20.0, -20.0],
            vec![20.0, 20.0],
        ),
        4 => ProblemSpec::new(
            "problem4",
            vec![f(|x| x[0]), f(|x| (1.0 + x[1]) / x[0])],
            // x2 + 9 x1 >= 6 and -x2 + 9 x1 >= 1, negated into g <= 0 form.
            vec![f(|x| 6.0 - x[1] - 9.0 * x[0]), f(|x| 1.0 + x[1] - 9.0 * x[0])],
            vec![0.1, 0.0],
            vec![1.0, 5.0],
        ),
        other => Err(ProblemError::UnknownBuiltin(other.to_string())),
    }
}

/// Looks a built-in up by id (`"3"`) or name (`"problem3"`, `"p3"`).
pub fn builtin_by_name(name: &str) -> Result<ProblemSpec, ProblemError> {
    let lower = name.trim().to_ascii_lowercase();
    let digits = lower
        .strip_prefix("problem")
        .or_else(|| lower.strip_prefix('p'))
        .unwrap_or(&lower);
    match digits.parse::<u32>() {
        Ok(id) => builtin(id),
        Err(_) => Err(ProblemError::UnknownBuiltin(name.to_string())),
    }
}
