//! Dense linear programming.
//!
//! Programs are stated as `A x = b` with per-variable bounds and an optional
//! linear objective (minimized). They are standardized to `A' z = b', z >= 0`
//! and solved with a two-phase tableau simplex under Bland's rule.

mod simplex;

use std::fmt::Write as _;

use thiserror::Error;

pub use simplex::solve_with;

/// Default feasibility tolerance shared by every LP-backed decision.
pub const FEAS_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("malformed program: {0}")]
    Malformed(String),
    #[error("simplex did not terminate within {0} pivots")]
    NoConvergence(usize),
    #[error("recovered point violates constraints by {0:e}")]
    Numerical(f64),
}

#[derive(Clone, Copy, Debug)]
pub struct LpConfig {
    /// Phase-1 optimum at or below this value (scaled by `max(1, |b|_inf)`) means feasible.
    pub feas_tol: f64,
    /// Entries smaller than this are never used as pivots.
    pub pivot_tol: f64,
    /// Reduced costs above `-opt_tol` count as nonnegative.
    pub opt_tol: f64,
    pub max_iter: usize,
    /// Record a text dump of the tableau after each phase.
    pub trace: bool,
}

impl Default for LpConfig {
    fn default() -> Self {
        Self {
            feas_tol: FEAS_TOL,
            pivot_tol: 1e-11,
            opt_tol: 1e-11,
            max_iter: 200_000,
            trace: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bound {
    pub lower: f64,
    pub upper: f64,
}

impl Bound {
    pub const NONNEG: Bound = Bound {
        lower: 0.0,
        upper: f64::INFINITY,
    };
    pub const FREE: Bound = Bound {
        lower: f64::NEG_INFINITY,
        upper: f64::INFINITY,
    };
}

/// `minimize c·x  s.t.  A x = b,  lower <= x <= upper`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<f64>,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    bounds: Vec<Bound>,
}

impl LinearProgram {
    /// A program over `num_vars` nonnegative variables with no constraints.
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            objective: vec![0.0; num_vars],
            rows: Vec::new(),
            rhs: Vec::new(),
            bounds: vec![Bound::NONNEG; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn bounds(&self) -> &[Bound] {
        &self.bounds
    }

    pub fn set_objective(&mut self, c: Vec<f64>) {
        assert_eq!(c.len(), self.num_vars, "objective length");
        self.objective = c;
    }

    pub fn add_eq(&mut self, row: Vec<f64>, rhs: f64) -> usize {
        assert_eq!(row.len(), self.num_vars, "constraint length");
        self.rows.push(row);
        self.rhs.push(rhs);
        self.rows.len() - 1
    }

    pub fn add_eq_sparse(&mut self, entries: &[(usize, f64)], rhs: f64) -> usize {
        let mut row = vec![0.0; self.num_vars];
        for &(j, v) in entries {
            row[j] += v;
        }
        self.add_eq(row, rhs)
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) {
        self.bounds[var] = Bound { lower, upper };
    }

    pub fn set_free(&mut self, var: usize) {
        self.bounds[var] = Bound::FREE;
    }

    /// Appends a variable with the given bounds and zero coefficients everywhere.
    pub fn push_var(&mut self, bound: Bound) -> usize {
        self.num_vars += 1;
        self.objective.push(0.0);
        self.bounds.push(bound);
        for row in &mut self.rows {
            row.push(0.0);
        }
        self.num_vars - 1
    }

    pub fn validate(&self) -> Result<(), LpError> {
        if self.objective.len() != self.num_vars || self.bounds.len() != self.num_vars {
            return Err(LpError::Malformed("inconsistent variable count".into()));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.num_vars {
                return Err(LpError::Malformed(format!(
                    "row {i} has {} entries",
                    row.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) || !self.rhs[i].is_finite() {
                return Err(LpError::Malformed(format!(
                    "row {i} has a non-finite entry"
                )));
            }
        }
        if self.objective.iter().any(|v| !v.is_finite()) {
            return Err(LpError::Malformed("non-finite objective".into()));
        }
        for (j, b) in self.bounds.iter().enumerate() {
            if b.lower.is_nan() || b.upper.is_nan() || b.lower > b.upper || b.lower == f64::INFINITY
            {
                return Err(LpError::Malformed(format!("bad bounds on variable {j}")));
            }
        }
        Ok(())
    }

    /// `max |A x - b|`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        self.rows
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| (row.iter().zip(x).map(|(a, v)| a * v).sum::<f64>() - b).abs())
            .fold(0.0, f64::max)
    }

    /// Largest violation of a variable bound.
    pub fn bound_violation(&self, x: &[f64]) -> f64 {
        self.bounds
            .iter()
            .zip(x)
            .map(|(b, &v)| (b.lower - v).max(v - b.upper).max(0.0))
            .fold(0.0, f64::max)
    }

    pub fn rhs_scale(&self) -> f64 {
        self.rhs.iter().fold(1.0_f64, |m, b| m.max(b.abs()))
    }

    /// Plain-text listing of the program.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "min {:?}", self.objective);
        for (row, b) in self.rows.iter().zip(&self.rhs) {
            let _ = writeln!(s, "  {row:?} = {b}");
        }
        let _ = writeln!(s, "bounds {:?}", self.bounds);
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpStatus {
    /// A feasible point; optimal when the program has an objective.
    Feasible(Vec<f64>),
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LpResult {
    pub status: LpStatus,
    /// Objective value at the returned point.
    pub objective: Option<f64>,
    /// For infeasible programs without finite upper bounds: multipliers `y`
    /// on the equality rows (in the shifted variables) with `y·b > 0` and
    /// `y·A_j <= 0` for every column.
    pub certificate: Option<Vec<f64>>,
    pub iterations: usize,
    pub trace: Vec<String>,
}

impl LpResult {
    pub fn point(&self) -> Option<&[f64]> {
        match &self.status {
            LpStatus::Feasible(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self.status, LpStatus::Feasible(_))
    }
}

pub fn solve(p: &LinearProgram) -> Result<LpResult, LpError> {
    solve_with(p, &LpConfig::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn minimize_on_segment() {
        let mut p = LinearProgram::new(2);
        p.add_eq(vec![1.0, 1.0], 1.0);
        p.set_objective(vec![1.0, 0.0]);
        let r = solve(&p).unwrap();
        let x = r.point().unwrap();
        assert_abs_diff_eq!(x[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(x[1], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.objective.unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn box_bounds_make_it_infeasible() {
        let mut p = LinearProgram::new(2);
        p.add_eq(vec![1.0, 1.0], 1.0);
        p.add_eq(vec![1.0, -1.0], 3.0);
        p.set_bounds(0, 0.0, 1.0);
        p.set_bounds(1, 0.0, 1.0);
        assert_eq!(solve(&p).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn free_variables_and_negative_rhs() {
        let mut p = LinearProgram::new(2);
        p.set_free(0);
        p.set_free(1);
        p.add_eq(vec![1.0, 1.0], -3.0);
        p.add_eq(vec![1.0, -1.0], 1.0);
        let r = solve(&p).unwrap();
        let x = r.point().unwrap();
        assert_abs_diff_eq!(x[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(x[1], -2.0, epsilon = 1e-12);
    }

    #[test]
    fn upper_only_bound() {
        let mut p = LinearProgram::new(1);
        p.set_bounds(0, f64::NEG_INFINITY, 2.0);
        p.set_objective(vec![-1.0]);
        let r = solve(&p).unwrap();
        assert_abs_diff_eq!(r.point().unwrap()[0], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn unbounded_objective() {
        let mut p = LinearProgram::new(2);
        p.add_eq(vec![1.0, -1.0], 0.0);
        p.set_objective(vec![-1.0, 0.0]);
        assert_eq!(solve(&p).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        let mut p = LinearProgram::new(3);
        p.add_eq(vec![1.0, 1.0, 1.0], 1.0);
        p.add_eq(vec![2.0, 2.0, 2.0], 2.0);
        p.add_eq(vec![1.0, 0.0, -1.0], 0.0);
        p.set_objective(vec![0.0, 1.0, 0.0]);
        let r = solve(&p).unwrap();
        let x = r.point().unwrap();
        assert!(p.residual(x) <= 1e-12);
        assert_abs_diff_eq!(x[1], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn farkas_certificate_separates() {
        let mut p = LinearProgram::new(2);
        p.add_eq(vec![1.0, 1.0], 1.0);
        p.add_eq(vec![1.0, 1.0], 2.0);
        let r = solve(&p).unwrap();
        assert_eq!(r.status, LpStatus::Infeasible);
        let y = r.certificate.unwrap();
        let yb: f64 = y.iter().zip(p.rhs()).map(|(a, b)| a * b).sum();
        assert!(yb > 0.0);
        for j in 0..2 {
            let ya: f64 = (0..2).map(|i| y[i] * p.rows()[i][j]).sum();
            assert!(ya <= 1e-12);
        }
    }

    #[test]
    fn malformed_programs_are_rejected() {
        let mut p = LinearProgram::new(1);
        p.set_bounds(0, 2.0, 1.0);
        assert!(matches!(solve(&p), Err(LpError::Malformed(_))));
        let mut p = LinearProgram::new(1);
        p.add_eq(vec![f64::NAN], 0.0);
        assert!(matches!(solve(&p), Err(LpError::Malformed(_))));
    }

    #[test]
    fn iteration_cap_is_reported() {
        let mut p = LinearProgram::new(4);
        p.add_eq(vec![1.0, 2.0, 3.0, 4.0], 10.0);
        p.add_eq(vec![4.0, 3.0, 2.0, 1.0], 10.0);
        let cfg = LpConfig {
            max_iter: 0,
            ..LpConfig::default()
        };
        assert_eq!(solve_with(&p, &cfg).unwrap_err(), LpError::NoConvergence(0));
    }

    #[test]
    fn trace_dumps_tableaux() {
        let mut p = LinearProgram::new(2);
        p.add_eq(vec![1.0, 1.0], 1.0);
        let cfg = LpConfig {
            trace: true,
            ..LpConfig::default()
        };
        let r = solve_with(&p, &cfg).unwrap();
        assert!(!r.trace.is_empty());
        assert!(r.trace[0].contains("phase 1"));
    }
}
