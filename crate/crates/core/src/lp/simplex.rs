//! Dense two-phase tableau simplex for `min cᵀx, Ax = b, x ≥ 0`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Debug, Clone)]
pub struct SimplexSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    /// Multipliers `y` of the equality rows, so that `cᵀ − yᵀA ≥ 0` at optimality.
    pub duals: Vec<f64>,
    pub iterations: usize,
}

const EPS: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;

struct Tableau {
    rows: usize,
    cols: usize,
    t: Vec<f64>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * self.cols + j]
    }

    fn pivot(&mut self, r: usize, c: usize, obj: &mut [f64], obj_val: &mut f64) {
        let cols = self.cols;
        let p = self.at(r, c);
        let inv = 1.0 / p;
        for j in 0..cols {
            self.t[r * cols + j] *= inv;
        }
        self.rhs[r] *= inv;
        self.t[r * cols + c] = 1.0;
        let (before, rest) = self.t.split_at_mut(r * cols);
        let (prow, after) = rest.split_at_mut(cols);
        let prow: &[f64] = prow;
        let eliminate = |row: &mut [f64], rhs: &mut f64, prhs: f64| {
            let f = row[c];
            if f != 0.0 {
                for (x, &y) in row.iter_mut().zip(prow) {
                    *x -= f * y;
                }
                row[c] = 0.0;
                *rhs -= f * prhs;
            }
        };
        let prhs = self.rhs[r];
        for (i, row) in before.chunks_mut(cols).enumerate() {
            eliminate(row, &mut self.rhs[i], prhs);
        }
        for (k, row) in after.chunks_mut(cols).enumerate() {
            let i = r + 1 + k;
            eliminate(row, &mut self.rhs[i], prhs);
        }
        let f = obj[c];
        if f != 0.0 {
            for (x, &y) in obj.iter_mut().zip(prow) {
                *x -= f * y;
            }
            obj[c] = 0.0;
            *obj_val -= f * prhs;
        }
        self.basis[r] = c;
    }

    /// Runs simplex iterations on reduced costs `obj`; columns with `allowed[j] == false` never enter.
    fn optimize(&mut self, obj: &mut [f64], obj_val: &mut f64, allowed: &[bool], max_iter: usize) -> (LpStatus, usize) {
        // Once stalling is detected Bland's rule stays on, which rules out cycling.
        let mut degenerate_run = 0usize;
        let mut bland = false;
        for it in 0..max_iter {
            bland |= degenerate_run > 50;
            let mut enter = None;
            let mut best = -EPS;
            for j in 0..self.cols {
                if !allowed[j] || obj[j] >= -EPS {
                    continue;
                }
                if bland {
                    enter = Some(j);
                    break;
                }
                if obj[j] < best {
                    best = obj[j];
                    enter = Some(j);
                }
            }
            let Some(c) = enter else {
                return (LpStatus::Optimal, it);
            };
            let mut leave = None;
            let mut ratio = f64::INFINITY;
            for i in 0..self.rows {
                let a = self.at(i, c);
                if a > PIVOT_TOL {
                    let q = self.rhs[i] / a;
                    let better = q < ratio - 1e-14
                        || (q <= ratio + 1e-14 && leave.is_some_and(|l: usize| self.basis[i] < self.basis[l]));
                    if better {
                        ratio = q;
                        leave = Some(i);
                    }
                }
            }
            let Some(r) = leave else {
                return (LpStatus::Unbounded, it);
            };
            degenerate_run = if ratio.abs() < 1e-12 { degenerate_run + 1 } else { 0 };
            self.pivot(r, c, obj, obj_val);
        }
        (LpStatus::IterationLimit, max_iter)
    }
}

/// Solves `min cᵀx` subject to `Ax = b`, `x ≥ 0`, with `A` dense row-major (`m × n`).
pub fn solve_standard(a: &[f64], b: &[f64], c: &[f64]) -> Result<SimplexSolution> {
    let m = b.len();
    let n = c.len();
    if a.len() != m * n {
        return Err(Error::Parameter("constraint matrix has the wrong size".into()));
    }
    let cols = n + m;
    let mut t = vec![0.0; m * cols];
    let mut rhs = vec![0.0; m];
    let mut flip = vec![1.0; m];
    for i in 0..m {
        let s = if b[i] < 0.0 { -1.0 } else { 1.0 };
        flip[i] = s;
        for j in 0..n {
            t[i * cols + j] = s * a[i * n + j];
        }
        t[i * cols + n + i] = 1.0;
        rhs[i] = s * b[i];
    }
    let mut tab = Tableau { rows: m, cols, t, rhs, basis: (n..n + m).collect() };
    let max_iter = 50 * (m + cols) + 1000;

    // Phase 1: minimize the sum of artificials.
    let mut obj = vec![0.0; cols];
    let mut obj_val = 0.0;
    for j in 0..n {
        obj[j] = -(0..m).map(|i| tab.at(i, j)).sum::<f64>();
    }
    obj_val -= tab.rhs.iter().sum::<f64>();
    let all = vec![true; cols];
    let (st, it1) = tab.optimize(&mut obj, &mut obj_val, &all, max_iter);
    if st == LpStatus::IterationLimit {
        return Ok(failed(LpStatus::IterationLimit, n, m, it1));
    }
    let scale = 1.0 + b.iter().map(|x| x.abs()).fold(0.0, f64::max);
    if -obj_val > 1e-9 * scale {
        return Ok(failed(LpStatus::Infeasible, n, m, it1));
    }
    // Drive remaining artificials out of the basis where possible.
    for r in 0..m {
        if tab.basis[r] >= n {
            if let Some(c) = (0..n).find(|&j| tab.at(r, j).abs() > 1e-9) {
                let mut dummy = vec![0.0; cols];
                let mut dv = 0.0;
                tab.pivot(r, c, &mut dummy, &mut dv);
            }
        }
    }

    // Phase 2 on the original costs.
    let mut obj = vec![0.0; cols];
    obj[..n].copy_from_slice(c);
    let mut obj_val = 0.0;
    for r in 0..m {
        let bj = tab.basis[r];
        let cb = if bj < n { c[bj] } else { 0.0 };
        if cb != 0.0 {
            for j in 0..cols {
                obj[j] -= cb * tab.at(r, j);
            }
            obj_val -= cb * tab.rhs[r];
        }
    }
    let mut allowed = vec![true; cols];
    for a in allowed.iter_mut().skip(n) {
        *a = false;
    }
    let (st, it2) = tab.optimize(&mut obj, &mut obj_val, &allowed, max_iter);
    let mut x = vec![0.0; n];
    for r in 0..m {
        if tab.basis[r] < n {
            x[tab.basis[r]] = tab.rhs[r].max(0.0);
        }
    }
    // Reduced cost of artificial column i is -y_i for the (possibly flipped) row.
    let duals = (0..m).map(|i| -obj[n + i] * flip[i]).collect();
    let objective = c.iter().zip(&x).map(|(a, b)| a * b).sum();
    Ok(SimplexSolution { status: st, x, objective, duals, iterations: it1 + it2 })
}

fn failed(status: LpStatus, n: usize, m: usize, iterations: usize) -> SimplexSolution {
    SimplexSolution { status, x: vec![0.0; n], objective: f64::NAN, duals: vec![0.0; m], iterations }
}

/// Solves `min cᵀx` subject to `Gx ≤ h` with `x` free, via the standard form.
pub fn solve_inequality(g: &[f64], h: &[f64], c: &[f64]) -> Result<SimplexSolution> {
    let m = h.len();
    let n = c.len();
    let cols = 2 * n + m;
    let mut a = vec![0.0; m * cols];
    for i in 0..m {
        for j in 0..n {
            a[i * cols + j] = g[i * n + j];
            a[i * cols + n + j] = -g[i * n + j];
        }
        a[i * cols + 2 * n + i] = 1.0;
    }
    let mut cc = vec![0.0; cols];
    cc[..n].copy_from_slice(c);
    for j in 0..n {
        cc[n + j] = -c[j];
    }
    let sol = solve_standard(&a, h, &cc)?;
    let x = (0..n).map(|j| sol.x[j] - sol.x[n + j]).collect();
    Ok(SimplexSolution { x, ..sol })
}
