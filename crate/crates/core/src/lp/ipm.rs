//! Mehrotra predictor-corrector interior-point method for
//! `min cᵀx subject to Gx ≤ h`, `x` free, with sparse rows of `G`.
//!
//! Each iteration factors the dense normal matrix `GᵀDG` once and reuses the
//! factor for the predictor and the corrector solves.

use faer::prelude::SpSolver;
use faer::{Mat, Side};

use crate::error::{Error, Result};

/// One sparse constraint row `Σ val·x[idx] ≤ h`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseRow {
    pub entries: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, Default)]
pub struct IneqLp {
    pub n: usize,
    pub rows: Vec<SparseRow>,
    pub h: Vec<f64>,
    pub c: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IpmStatus {
    Optimal,
    /// Stopped without meeting the tolerances; the iterate is returned as is.
    NotConverged,
}

#[derive(Debug, Clone)]
pub struct IpmSolution {
    pub status: IpmStatus,
    pub x: Vec<f64>,
    pub z: Vec<f64>,
    pub primal_objective: f64,
    /// `−hᵀz`, the dual objective.
    pub dual_objective: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct IpmOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for IpmOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 120 }
    }
}

impl IneqLp {
    pub fn push(&mut self, entries: Vec<(usize, f64)>, h: f64) {
        self.rows.push(SparseRow { entries });
        self.h.push(h);
    }

    fn mul(&self, x: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|r| r.entries.iter().map(|&(j, v)| v * x[j]).sum()).collect()
    }

    fn mul_t(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (r, &yi) in self.rows.iter().zip(y) {
            for &(j, v) in &r.entries {
                out[j] += v * yi;
            }
        }
        out
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

fn max_step(v: &[f64], dv: &[f64]) -> f64 {
    v.iter()
        .zip(dv)
        .filter(|(_, &d)| d < 0.0)
        .map(|(&a, &d)| -a / d)
        .fold(1.0, f64::min)
}

pub fn solve(lp: &IneqLp, opts: IpmOptions) -> Result<IpmSolution> {
    let n = lp.n;
    let m = lp.rows.len();
    if lp.c.len() != n || lp.h.len() != m {
        return Err(Error::Parameter("inconsistent LP dimensions".into()));
    }
    if m == 0 {
        return Err(Error::Parameter("LP without constraints".into()));
    }
    let mut x = vec![0.0; n];
    let mut s: Vec<f64> = lp.h.iter().map(|&h| h.max(0.0) + 1.0).collect();
    let mut z = vec![1.0; m];
    let h_scale = 1.0 + inf_norm(&lp.h);
    let c_scale = 1.0 + inf_norm(&lp.c);

    for it in 0..opts.max_iter {
        let gx = lp.mul(&x);
        let r_p: Vec<f64> = (0..m).map(|i| gx[i] + s[i] - lp.h[i]).collect();
        let gtz = lp.mul_t(&z);
        let r_d: Vec<f64> = (0..n).map(|j| gtz[j] + lp.c[j]).collect();
        let pobj: f64 = lp.c.iter().zip(&x).map(|(a, b)| a * b).sum();
        let dobj: f64 = -lp.h.iter().zip(&z).map(|(a, b)| a * b).sum::<f64>();
        let mu = s.iter().zip(&z).map(|(a, b)| a * b).sum::<f64>() / m as f64;
        if inf_norm(&r_p) <= opts.tol * h_scale
            && inf_norm(&r_d) <= opts.tol * c_scale
            && (pobj - dobj).abs() <= opts.tol * (1.0 + pobj.abs())
        {
            return Ok(IpmSolution {
                status: IpmStatus::Optimal,
                x,
                z,
                primal_objective: pobj,
                dual_objective: dobj,
                iterations: it,
            });
        }

        let d: Vec<f64> = (0..m).map(|i| z[i] / s[i]).collect();
        let chol = factor(lp, &d)?;
        let solve_dir = |r_c: &[f64]| -> (Vec<f64>, Vec<f64>, Vec<f64>) {
            let w: Vec<f64> = (0..m).map(|i| (r_c[i] - z[i] * r_p[i]) / s[i]).collect();
            let gtw = lp.mul_t(&w);
            let rhs = Mat::from_fn(n, 1, |j, _| -r_d[j] + gtw[j]);
            let sol = chol.solve(&rhs);
            let dx: Vec<f64> = (0..n).map(|j| sol[(j, 0)]).collect();
            let gdx = lp.mul(&dx);
            let ds: Vec<f64> = (0..m).map(|i| -r_p[i] - gdx[i]).collect();
            let dz: Vec<f64> = (0..m).map(|i| (-r_c[i] - z[i] * ds[i]) / s[i]).collect();
            (dx, ds, dz)
        };

        let r_aff: Vec<f64> = (0..m).map(|i| s[i] * z[i]).collect();
        let (_, ds_a, dz_a) = solve_dir(&r_aff);
        let ap = max_step(&s, &ds_a);
        let ad = max_step(&z, &dz_a);
        let mu_aff = (0..m).map(|i| (s[i] + ap * ds_a[i]) * (z[i] + ad * dz_a[i])).sum::<f64>() / m as f64;
        let sigma = (mu_aff / mu).powi(3).clamp(0.0, 1.0);
        let r_c: Vec<f64> = (0..m).map(|i| s[i] * z[i] + ds_a[i] * dz_a[i] - sigma * mu).collect();
        let (dx, ds, dz) = solve_dir(&r_c);
        let ap = (0.99 * max_step(&s, &ds)).min(1.0);
        let ad = (0.99 * max_step(&z, &dz)).min(1.0);
        for j in 0..n {
            x[j] += ap * dx[j];
        }
        for i in 0..m {
            s[i] += ap * ds[i];
            z[i] += ad * dz[i];
        }
        if !x.iter().all(|v| v.is_finite()) || !z.iter().all(|v| v.is_finite()) {
            return Err(Error::Numeric("interior-point iterate diverged".into()));
        }
    }
    let pobj = lp.c.iter().zip(&x).map(|(a, b)| a * b).sum();
    let dobj = -lp.h.iter().zip(&z).map(|(a, b)| a * b).sum::<f64>();
    Ok(IpmSolution {
        status: IpmStatus::NotConverged,
        x,
        z,
        primal_objective: pobj,
        dual_objective: dobj,
        iterations: opts.max_iter,
    })
}

fn factor(lp: &IneqLp, d: &[f64]) -> Result<faer::solvers::Cholesky<f64>> {
    let n = lp.n;
    let mut mat = Mat::<f64>::zeros(n, n);
    for (row, &di) in lp.rows.iter().zip(d) {
        for &(a, va) in &row.entries {
            for &(b, vb) in &row.entries {
                if b <= a {
                    mat[(a, b)] += di * va * vb;
                }
            }
        }
    }
    let diag_max = (0..n).map(|j| mat[(j, j)]).fold(0.0, f64::max).max(1e-300);
    let mut reg = 1e-14 * diag_max;
    for _ in 0..8 {
        let mut m2 = mat.clone();
        for j in 0..n {
            m2[(j, j)] += reg;
        }
        if let Ok(ch) = m2.cholesky(Side::Lower) {
            return Ok(ch);
        }
        reg *= 100.0;
    }
    Err(Error::Numeric("normal equations are not positive definite".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebyshev_center() {
        // min t s.t. |x - 1| <= t, |x - 3| <= t.
        let mut lp = IneqLp { n: 2, c: vec![0.0, 1.0], ..Default::default() };
        lp.push(vec![(0, 1.0), (1, -1.0)], 1.0);
        lp.push(vec![(0, -1.0), (1, -1.0)], -1.0);
        lp.push(vec![(0, 1.0), (1, -1.0)], 3.0);
        lp.push(vec![(0, -1.0), (1, -1.0)], -3.0);
        let s = solve(&lp, IpmOptions::default()).unwrap();
        assert_eq!(s.status, IpmStatus::Optimal);
        assert!((s.x[0] - 2.0).abs() < 1e-8 && (s.primal_objective - 1.0).abs() < 1e-9);
        assert!((s.dual_objective - 1.0).abs() < 1e-9);
    }

    #[test]
    fn agrees_with_simplex_on_random_lp() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let (n, m) = (6, 40);
        let g: Vec<f64> = (0..n * m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let h: Vec<f64> = (0..m).map(|_| rng.gen_range(0.5..2.0)).collect();
        let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut lp = IneqLp { n, c: c.clone(), ..Default::default() };
        for i in 0..m {
            lp.push((0..n).map(|j| (j, g[i * n + j])).collect(), h[i]);
        }
        let a = solve(&lp, IpmOptions::default()).unwrap();
        let b = crate::lp::simplex::solve_inequality(&g, &h, &c).unwrap();
        assert_eq!(a.status, IpmStatus::Optimal);
        assert!((a.primal_objective - b.objective).abs() < 1e-8 * (1.0 + b.objective.abs()));
    }
}
