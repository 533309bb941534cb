use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};

use super::{LinearProgram, LpConfig, LpError, LpResult, LpStatus};

/// How an original variable is expressed through standardized columns.
#[derive(Clone, Copy, Debug)]
enum VarMap {
    /// `x = lower + z`
    Shift { col: usize, lower: f64 },
    /// `x = upper - z`
    Reflect { col: usize, upper: f64 },
    /// `x = z+ - z-`
    Split { pos: usize, neg: usize },
}

/// `A z = b, z >= 0, min c·z`, plus the map back to the original variables.
struct Standard {
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    c: Vec<f64>,
    maps: Vec<VarMap>,
    /// Number of rows coming from the original equalities (the rest encode upper bounds).
    eq_rows: usize,
}

fn standardize(p: &LinearProgram) -> Standard {
    let mut maps = Vec::with_capacity(p.num_vars());
    let mut ncols = 0;
    let mut upper_rows = Vec::new();
    for b in p.bounds() {
        if b.lower.is_finite() {
            maps.push(VarMap::Shift {
                col: ncols,
                lower: b.lower,
            });
            if b.upper.is_finite() {
                upper_rows.push((ncols, b.upper - b.lower));
            }
            ncols += 1;
        } else if b.upper.is_finite() {
            maps.push(VarMap::Reflect {
                col: ncols,
                upper: b.upper,
            });
            ncols += 1;
        } else {
            maps.push(VarMap::Split {
                pos: ncols,
                neg: ncols + 1,
            });
            ncols += 2;
        }
    }
    let slack_base = ncols;
    ncols += upper_rows.len();

    let mut a = Vec::with_capacity(p.num_rows() + upper_rows.len());
    let mut b = Vec::with_capacity(a.capacity());
    for (row, &rhs) in p.rows().iter().zip(p.rhs()) {
        let mut out = vec![0.0; ncols];
        let mut r = rhs;
        for (coef, map) in row.iter().zip(&maps) {
            if *coef == 0.0 {
                continue;
            }
            match *map {
                VarMap::Shift { col, lower } => {
                    out[col] += coef;
                    r -= coef * lower;
                }
                VarMap::Reflect { col, upper } => {
                    out[col] -= coef;
                    r -= coef * upper;
                }
                VarMap::Split { pos, neg } => {
                    out[pos] += coef;
                    out[neg] -= coef;
                }
            }
        }
        a.push(out);
        b.push(r);
    }
    let eq_rows = a.len();
    for (k, &(col, width)) in upper_rows.iter().enumerate() {
        let mut out = vec![0.0; ncols];
        out[col] = 1.0;
        out[slack_base + k] = 1.0;
        a.push(out);
        b.push(width);
    }

    let mut c = vec![0.0; ncols];
    for (coef, map) in p.objective().iter().zip(&maps) {
        match *map {
            VarMap::Shift { col, .. } => c[col] += coef,
            VarMap::Reflect { col, .. } => c[col] -= coef,
            VarMap::Split { pos, neg } => {
                c[pos] += coef;
                c[neg] -= coef;
            }
        }
    }
    Standard {
        a,
        b,
        c,
        maps,
        eq_rows,
    }
}

struct Tableau {
    /// `rows + 1` rows of `cols + 1` entries; the last row holds reduced costs
    /// and `-objective`, the last column the basic values.
    t: Vec<f64>,
    rows: usize,
    cols: usize,
    basis: Vec<usize>,
    iterations: usize,
}

impl Tableau {
    fn width(&self) -> usize {
        self.cols + 1
    }

    fn at(&self, r: usize, c: usize) -> f64 {
        self.t[r * self.width() + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.width();
        let inv = 1.0 / self.at(pr, pc);
        for c in 0..w {
            self.t[pr * w + c] *= inv;
        }
        self.t[pr * w + pc] = 1.0;
        let pivot_row: Vec<f64> = self.t[pr * w..(pr + 1) * w].to_vec();
        for r in 0..=self.rows {
            if r == pr {
                continue;
            }
            let f = self.t[r * w + pc];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.t[r * w..(r + 1) * w];
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= f * p;
            }
            row[pc] = 0.0;
        }
        self.basis[pr] = pc;
    }

    /// Bland's rule: lowest-index improving column, ties in the ratio test
    /// broken by lowest basic index.
    fn run(&mut self, allowed: usize, cfg: &LpConfig) -> Result<bool, LpError> {
        loop {
            let obj = self.rows;
            let entering = (0..allowed).find(|&j| self.at(obj, j) < -cfg.opt_tol);
            let Some(j) = entering else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, j);
                if a <= cfg.pivot_tol {
                    continue;
                }
                let ratio = self.rhs(r).max(0.0) / a;
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((br, best)) => {
                        let tie = (ratio - best).abs() <= 1e-12 * (1.0 + best.abs());
                        if ratio < best && !tie || tie && self.basis[r] < self.basis[br] {
                            Some((r, ratio))
                        } else {
                            Some((br, best))
                        }
                    }
                };
            }
            let Some((r, _)) = leave else {
                return Ok(false);
            };
            if self.iterations >= cfg.max_iter {
                return Err(LpError::NoConvergence(cfg.max_iter));
            }
            self.iterations += 1;
            self.pivot(r, j);
        }
    }

    fn dump(&self, title: &str) -> String {
        let mut s = format!("{title}: basis {:?}\n", self.basis);
        for r in 0..=self.rows {
            let row: Vec<String> = (0..self.width())
                .map(|c| format!("{:>10.4}", self.at(r, c)))
                .collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        s
    }
}

/// Solves `p` with the given configuration.
pub fn solve_with(p: &LinearProgram, cfg: &LpConfig) -> Result<LpResult, LpError> {
    p.validate()?;
    let std = standardize(p);
    let m = std.a.len();
    let n = std.c.len();
    let mut trace = Vec::new();

    // Flip rows so that b >= 0; artificial columns n..n+m start basic.
    let signs: Vec<f64> = std
        .b
        .iter()
        .map(|&v| if v < 0.0 { -1.0 } else { 1.0 })
        .collect();
    let cols = n + m;
    let w = cols + 1;
    let mut t = vec![0.0; (m + 1) * w];
    for r in 0..m {
        for c in 0..n {
            t[r * w + c] = signs[r] * std.a[r][c];
        }
        t[r * w + n + r] = 1.0;
        t[r * w + cols] = signs[r] * std.b[r];
    }
    for c in 0..n {
        t[m * w + c] = -(0..m).map(|r| t[r * w + c]).sum::<f64>();
    }
    t[m * w + cols] = -(0..m).map(|r| t[r * w + cols]).sum::<f64>();
    let mut tab = Tableau {
        t,
        rows: m,
        cols,
        basis: (n..n + m).collect(),
        iterations: 0,
    };

    // Phase 1 may enter artificial columns too; they never improve it, so restrict to structural ones.
    tab.run(n, cfg)?;
    if cfg.trace {
        trace.push(tab.dump("phase 1"));
    }
    let infeasibility = -tab.rhs(m);
    let scale = std.b.iter().fold(1.0_f64, |a, b| a.max(b.abs()));
    if infeasibility > cfg.feas_tol * scale {
        let certificate = (std.eq_rows == m).then(|| {
            (0..m)
                .map(|r| signs[r] * (1.0 - tab.at(m, n + r)))
                .collect()
        });
        return Ok(LpResult {
            status: LpStatus::Infeasible,
            objective: None,
            certificate,
            iterations: tab.iterations,
            trace,
        });
    }

    // Drive remaining artificials out of the basis; rows where that is impossible are redundant.
    for r in 0..m {
        if tab.basis[r] < n {
            continue;
        }
        let best = (0..n)
            .map(|c| (c, tab.at(r, c).abs()))
            .filter(|&(_, v)| v > cfg.pivot_tol)
            .max_by(|a, b| a.1.total_cmp(&b.1));
        if let Some((c, _)) = best {
            tab.pivot(r, c);
        }
    }

    let has_objective = std.c.iter().any(|&v| v != 0.0);
    if has_objective {
        let w = tab.width();
        for c in 0..w {
            let mut v = if c < n { std.c[c] } else { 0.0 };
            for r in 0..m {
                let bc = tab.basis[r];
                let cb = if bc < n { std.c[bc] } else { 0.0 };
                v -= cb * tab.at(r, c);
            }
            tab.t[m * w + c] = v;
        }
        let bounded = tab.run(n, cfg)?;
        if cfg.trace {
            trace.push(tab.dump("phase 2"));
        }
        if !bounded {
            return Ok(LpResult {
                status: LpStatus::Unbounded,
                objective: None,
                certificate: None,
                iterations: tab.iterations,
                trace,
            });
        }
    }

    let z = recover_point(&tab, &std, &signs, n);
    let x: Vec<f64> = std
        .maps
        .iter()
        .map(|map| match *map {
            VarMap::Shift { col, lower } => lower + z[col],
            VarMap::Reflect { col, upper } => upper - z[col],
            VarMap::Split { pos, neg } => z[pos] - z[neg],
        })
        .collect();

    let tol = cfg.feas_tol * p.rhs_scale();
    let violation = p.residual(&x).max(p.bound_violation(&x));
    if violation > tol {
        return Err(LpError::Numerical(violation));
    }
    let objective = p.objective().iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpResult {
        status: LpStatus::Feasible(x),
        objective: Some(objective),
        certificate: None,
        iterations: tab.iterations,
        trace,
    })
}

/// Basic values re-solved from the original data, which removes the
/// round-off the tableau accumulates over many pivots.
fn recover_point(tab: &Tableau, std: &Standard, signs: &[f64], n: usize) -> Vec<f64> {
    let m = tab.rows;
    let mut z = vec![0.0; n];
    let from_tableau = |z: &mut Vec<f64>| {
        for r in 0..m {
            if tab.basis[r] < n {
                z[tab.basis[r]] = tab.rhs(r).max(0.0);
            }
        }
    };
    if m == 0 {
        return z;
    }
    let basis_matrix = DMatrix::from_fn(m, m, |r, k| {
        let col = tab.basis[k];
        if col < n {
            signs[r] * std.a[r][col]
        } else if col - n == r {
            1.0
        } else {
            0.0
        }
    });
    let rhs = DVector::from_fn(m, |r, _| signs[r] * std.b[r]);
    match basis_matrix.lu().solve(&rhs) {
        Some(sol) if sol.iter().all(|v| v.is_finite()) => {
            for k in 0..m {
                if tab.basis[k] < n {
                    z[tab.basis[k]] = sol[k].max(0.0);
                }
            }
        }
        _ => from_tableau(&mut z),
    }
    z
}
