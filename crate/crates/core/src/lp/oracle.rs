use itertools::Itertools;

use super::{dot, LinearProgram, LpError, LpSolution, Relation, Sense};

pub const ORACLE_MAX_VARIABLES: usize = 8;
pub const ORACLE_MAX_CONSTRAINTS: usize = 12;

const SINGULAR_TOL: f64 = 1e-12;
const FEAS_TOL: f64 = 1e-9;
const RAY_TOL: f64 = 1e-9;

/// Exact optimum by enumerating every basic solution.
///
/// The feasible region always includes `x >= lower`, so it is pointed: if it
/// is nonempty it has a vertex, and the program is unbounded exactly when the
/// recession cone `{d >= 0 : A d (rel) 0}` contains an improving direction.
/// The cone is normalized by `sum(d) = 1`, which turns it into a polytope
/// whose vertices are enumerated the same way.
pub fn enumerate_vertices_oracle(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    lp.validate()?;
    let n = lp.num_vars();
    let m = lp.num_rows();
    if n > ORACLE_MAX_VARIABLES || m > ORACLE_MAX_CONSTRAINTS {
        return Err(LpError::OracleLimit { vars: n, rows: m });
    }
    let cost: Vec<f64> = match lp.sense {
        Sense::Minimize => lp.objective.clone(),
        Sense::Maximize => lp.objective.iter().map(|c| -c).collect(),
    };

    // Hyperplanes: constraint rows first, then the bounds x_j = lower_j.
    let mut planes: Vec<(Vec<f64>, f64)> = lp
        .matrix
        .iter()
        .cloned()
        .zip(lp.rhs.iter().copied())
        .collect();
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        planes.push((e, lp.lower_bounds[j]));
    }

    let mut best: Option<(f64, Vec<f64>)> = None;
    for subset in (0..planes.len()).combinations(n) {
        let a: Vec<Vec<f64>> = subset.iter().map(|&i| planes[i].0.clone()).collect();
        let b: Vec<f64> = subset.iter().map(|&i| planes[i].1).collect();
        let Some(x) = solve_square(a, b) else { continue };
        if !is_feasible(lp, &x) {
            continue;
        }
        let value = dot(&cost, &x);
        if best.as_ref().is_none_or(|(v, _)| value < *v) {
            best = Some((value, x));
        }
    }
    let Some((_, x)) = best else {
        return Ok(LpSolution::infeasible());
    };

    // Directions of the normalized recession cone.
    let mut ray_planes: Vec<Vec<f64>> = lp.matrix.clone();
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        ray_planes.push(e);
    }
    for subset in (0..ray_planes.len()).combinations(n - 1) {
        let mut a: Vec<Vec<f64>> = subset.iter().map(|&i| ray_planes[i].clone()).collect();
        let mut b = vec![0.0; n - 1];
        a.push(vec![1.0; n]);
        b.push(1.0);
        let Some(d) = solve_square(a, b) else { continue };
        if is_recession_direction(lp, &d) && dot(&cost, &d) < -RAY_TOL {
            return Ok(LpSolution::unbounded());
        }
    }

    Ok(LpSolution::optimal(lp.objective_at(&x), x))
}

fn is_feasible(lp: &LinearProgram, x: &[f64]) -> bool {
    if x
        .iter()
        .zip(&lp.lower_bounds)
        .any(|(v, lb)| *v < lb - FEAS_TOL * (1.0 + lb.abs()))
    {
        return false;
    }
    lp.matrix
        .iter()
        .zip(&lp.relations)
        .zip(&lp.rhs)
        .all(|((row, rel), &b)| {
            let lhs = dot(row, x);
            let tol = FEAS_TOL * (1.0 + b.abs() + row.iter().zip(x).map(|(a, v)| (a * v).abs()).sum::<f64>());
            match rel {
                Relation::LessEq => lhs <= b + tol,
                Relation::GreaterEq => lhs >= b - tol,
                Relation::Equal => (lhs - b).abs() <= tol,
            }
        })
}

fn is_recession_direction(lp: &LinearProgram, d: &[f64]) -> bool {
    if d.iter().any(|v| *v < -FEAS_TOL) {
        return false;
    }
    lp.matrix.iter().zip(&lp.relations).all(|(row, rel)| {
        let lhs = dot(row, d);
        let tol = FEAS_TOL * (1.0 + row.iter().zip(d).map(|(a, v)| (a * v).abs()).sum::<f64>());
        match rel {
            Relation::LessEq => lhs <= tol,
            Relation::GreaterEq => lhs >= -tol,
            Relation::Equal => lhs.abs() <= tol,
        }
    })
}

/// Gaussian elimination with partial pivoting; `None` if singular.
fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        let scale = a[piv].iter().fold(0.0f64, |s, v| s.max(v.abs()));
        if a[piv][col].abs() <= SINGULAR_TOL * scale.max(1.0) {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::LpStatus;

    #[test]
    fn binding_lower_constraints() {
        let lp = LinearProgram::new(
            Sense::Minimize,
            vec![1.0, 1.0],
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![Relation::GreaterEq; 2],
            vec![1.0, 1.0],
        );
        let s = enumerate_vertices_oracle(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective_value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded_ray_is_detected() {
        let lp = LinearProgram::new(
            Sense::Maximize,
            vec![1.0],
            vec![vec![1.0]],
            vec![Relation::GreaterEq],
            vec![0.0],
        );
        assert_eq!(enumerate_vertices_oracle(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn infeasible_has_no_vertex() {
        let lp = LinearProgram::new(
            Sense::Minimize,
            vec![1.0],
            vec![vec![1.0], vec![1.0]],
            vec![Relation::GreaterEq, Relation::LessEq],
            vec![1.0, 0.0],
        );
        assert_eq!(enumerate_vertices_oracle(&lp).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn rejects_oversized_programs() {
        let n = ORACLE_MAX_VARIABLES + 1;
        let lp = LinearProgram::new(
            Sense::Minimize,
            vec![1.0; n],
            vec![vec![1.0; n]],
            vec![Relation::GreaterEq],
            vec![1.0],
        );
        assert!(matches!(
            enumerate_vertices_oracle(&lp),
            Err(LpError::OracleLimit { .. })
        ));
    }

    #[test]
    fn ccr_vertex_enumeration() {
        let lp = LinearProgram::new(
            Sense::Minimize,
            vec![3.0, 3.0],
            vec![vec![1.0, 4.0], vec![2.0, 2.0], vec![4.0, 1.0], vec![3.0, 3.0]],
            vec![Relation::GreaterEq; 4],
            vec![1.0; 4],
        );
        let s = enumerate_vertices_oracle(&lp).unwrap();
        assert!((s.objective_value - 1.5).abs() < 1e-12);
    }
}
