use super::{
    LinearProgram, LpError, LpSolution, Relation, Sense, FEASIBILITY_TOL, OPTIMALITY_TOL,
    PIVOT_TOL,
};

/// Feasibility check applied to the recovered primal point against the
/// original (unshifted, unflipped) program.
const VERIFY_TOL: f64 = 1e-7;

/// Solves `lp` with the two-phase dense-tableau simplex method.
///
/// Infeasible and unbounded programs are reported through
/// [`LpSolution::status`]; errors are reserved for malformed input and for
/// numerical breakdown.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    lp.validate()?;
    let n = lp.num_vars();
    let m = lp.num_rows();

    // Shift variables to x' = x - lower >= 0. Inequalities are stored as
    // `<=` rows with a slack; equalities get a nonnegative rhs.
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut is_eq = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = lp.matrix[i].clone();
        let mut b = lp.rhs[i] - super::dot(&row, &lp.lower_bounds);
        let flip = match lp.relations[i] {
            Relation::LessEq => false,
            Relation::GreaterEq => true,
            Relation::Equal => b < 0.0,
        };
        if flip {
            row.iter_mut().for_each(|a| *a = -*a);
            b = -b;
        }
        rows.push(row);
        is_eq.push(lp.relations[i] == Relation::Equal);
        rhs.push(b);
    }

    // Inequality rows with negative rhs share one artificial column (entered
    // with coefficient -1); each equality row gets its own.
    let n_slack = is_eq.iter().filter(|e| !**e).count();
    let shared = (0..m).any(|i| !is_eq[i] && rhs[i] < 0.0);
    let n_eq = m - n_slack;
    let art_start = n + n_slack;
    let ncols = art_start + usize::from(shared) + n_eq;

    let mut tab = Tableau::new(m, ncols, n);
    let mut basis = vec![0; m];
    let mut slack = n;
    let mut art = art_start + usize::from(shared);
    for i in 0..m {
        tab.row_mut(i)[..n].copy_from_slice(&rows[i]);
        tab.row_mut(i)[ncols] = rhs[i];
        if is_eq[i] {
            tab.row_mut(i)[art] = 1.0;
            basis[i] = art;
            art += 1;
        } else {
            tab.row_mut(i)[slack] = 1.0;
            basis[i] = slack;
            slack += 1;
            if rhs[i] < 0.0 {
                tab.row_mut(i)[art_start] = -1.0;
            }
        }
    }
    tab.set_basis(basis);

    if ncols > art_start {
        if shared {
            let worst = (0..m)
                .filter(|&i| !is_eq[i])
                .min_by(|&a, &b| rhs[a].total_cmp(&rhs[b]).then(a.cmp(&b)))
                .unwrap();
            tab.pivot(worst, art_start);
        }
        let mut cost = vec![0.0; ncols];
        cost[art_start..].iter_mut().for_each(|c| *c = 1.0);
        let allowed = vec![true; ncols];
        tab.set_costs(&cost);
        // Phase one is bounded below by zero, so it cannot report unbounded.
        tab.optimize(&allowed)?;
        let scale = 1.0 + rhs.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        if tab.objective_value() > FEASIBILITY_TOL * scale {
            return Ok(LpSolution::infeasible());
        }
        tab.drive_out_artificials(art_start);
    }

    let sign = match lp.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let mut cost = vec![0.0; ncols];
    for j in 0..n {
        cost[j] = sign * lp.objective[j];
    }
    let allowed: Vec<bool> = (0..ncols).map(|j| j < art_start).collect();
    tab.set_costs(&cost);
    if tab.optimize(&allowed)? == Outcome::Unbounded {
        return Ok(LpSolution::unbounded());
    }

    let mut primal = lp.lower_bounds.clone();
    for (r, &j) in tab.basis.iter().enumerate() {
        if j < n {
            primal[j] += tab.rhs(r);
        }
    }
    let violation = lp.max_scaled_violation(&primal);
    if violation > VERIFY_TOL {
        return Err(LpError::NumericallySingular(format!(
            "recovered point violates constraints by {violation:e}"
        )));
    }
    Ok(LpSolution::optimal(lp.objective_at(&primal), primal))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Optimal,
    Unbounded,
}

struct Tableau {
    m: usize,
    width: usize,
    /// Structural variable count of the original program.
    n_structural: usize,
    data: Vec<f64>,
    /// Reduced costs; the last entry holds the negated objective value.
    obj: Vec<f64>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
}

impl Tableau {
    fn new(m: usize, ncols: usize, n_structural: usize) -> Self {
        let width = ncols + 1;
        Tableau {
            m,
            width,
            n_structural,
            data: vec![0.0; m * width],
            obj: vec![0.0; width],
            basis: vec![usize::MAX; m],
            is_basic: vec![false; ncols],
        }
    }

    fn set_basis(&mut self, basis: Vec<usize>) {
        for &j in &basis {
            self.is_basic[j] = true;
        }
        self.basis = basis;
    }

    fn ncols(&self) -> usize {
        self.width - 1
    }

    fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.width..(r + 1) * self.width]
    }

    fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.width..(r + 1) * self.width]
    }

    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.width + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.width - 1)
    }

    fn objective_value(&self) -> f64 {
        -self.obj[self.width - 1]
    }

    fn set_costs(&mut self, cost: &[f64]) {
        let w = self.width;
        self.obj.clear();
        self.obj.extend_from_slice(cost);
        self.obj.push(0.0);
        for r in 0..self.m {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                let row = &self.data[r * w..(r + 1) * w];
                for (o, a) in self.obj.iter_mut().zip(row) {
                    *o -= cb * a;
                }
            }
        }
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.width;
        let p = self.at(pr, pc);
        {
            let row = self.row_mut(pr);
            row.iter_mut().for_each(|v| *v /= p);
            row[pc] = 1.0;
        }
        let pivot_row: Vec<f64> = self.row(pr).to_vec();
        for r in 0..self.m {
            if r == pr {
                continue;
            }
            let f = self.at(r, pc);
            if f != 0.0 {
                let row = &mut self.data[r * w..(r + 1) * w];
                for (v, a) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * a;
                }
                row[pc] = 0.0;
                if row[w - 1] < 0.0 && row[w - 1] > -FEASIBILITY_TOL {
                    row[w - 1] = 0.0;
                }
            }
        }
        let f = self.obj[pc];
        if f != 0.0 {
            for (v, a) in self.obj.iter_mut().zip(&pivot_row) {
                *v -= f * a;
            }
            self.obj[pc] = 0.0;
        }
        self.is_basic[self.basis[pr]] = false;
        self.is_basic[pc] = true;
        self.basis[pr] = pc;
    }

    fn entering(&self, allowed: &[bool], bland: bool) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for j in 0..self.ncols() {
            if !allowed[j] || self.is_basic[j] {
                continue;
            }
            let d = self.obj[j];
            if d < -OPTIMALITY_TOL {
                if bland {
                    return Some(j);
                }
                if best.is_none_or(|(_, bd)| d < bd) {
                    best = Some((j, d));
                }
            }
        }
        best.map(|(j, _)| j)
    }

    fn leaving(&self, pc: usize) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for r in 0..self.m {
            let a = self.at(r, pc);
            if a <= PIVOT_TOL {
                continue;
            }
            let ratio = self.rhs(r) / a;
            best = match best {
                None => Some((r, ratio)),
                Some((br, bratio)) => {
                    let tie = (ratio - bratio).abs() <= 1e-12 * (1.0 + bratio.abs());
                    if (tie && self.basis[r] < self.basis[br]) || (!tie && ratio < bratio) {
                        Some((r, ratio))
                    } else {
                        Some((br, bratio))
                    }
                }
            };
        }
        best.map(|(r, _)| r)
    }

    fn optimize(&mut self, allowed: &[bool]) -> Result<Outcome, LpError> {
        let stall_limit = 2 * (self.m + self.n_structural);
        let max_iterations = 50 * (self.m + self.width) + 1000;
        let mut stall = 0usize;
        let mut bland = false;
        for _ in 0..max_iterations {
            let Some(pc) = self.entering(allowed, bland) else {
                return Ok(Outcome::Optimal);
            };
            let Some(pr) = self.leaving(pc) else {
                return Ok(Outcome::Unbounded);
            };
            let before = self.objective_value();
            self.pivot(pr, pc);
            let after = self.objective_value();
            if after < before - 1e-12 * (1.0 + before.abs()) {
                stall = 0;
            } else {
                stall += 1;
                if stall > stall_limit {
                    bland = true;
                }
            }
        }
        Err(LpError::NumericallySingular(format!(
            "no convergence after {max_iterations} pivots"
        )))
    }

    /// Pivots basic artificial variables out after phase one and drops rows
    /// that turn out to be linearly dependent.
    fn drive_out_artificials(&mut self, art_start: usize) {
        let mut redundant = Vec::new();
        for r in 0..self.m {
            if self.basis[r] < art_start {
                continue;
            }
            let mut best: Option<(usize, f64)> = None;
            for j in 0..art_start {
                if self.is_basic[j] {
                    continue;
                }
                let a = self.at(r, j).abs();
                if a > PIVOT_TOL && best.is_none_or(|(_, b)| a > b) {
                    best = Some((j, a));
                }
            }
            match best {
                Some((j, _)) => self.pivot(r, j),
                None => redundant.push(r),
            }
        }
        if redundant.is_empty() {
            return;
        }
        let w = self.width;
        let mut data = Vec::with_capacity(self.data.len());
        let mut basis = Vec::with_capacity(self.m);
        for r in 0..self.m {
            if !redundant.contains(&r) {
                data.extend_from_slice(&self.data[r * w..(r + 1) * w]);
                basis.push(self.basis[r]);
            }
        }
        self.m = basis.len();
        self.data = data;
        self.basis = basis;
    }
}
