//! Zygmund-class condenser capacity of arcs on a grid, as a linear program, and
//! the closed-class degree-one upper bound.
//!
//! The grid value constrains only finitely many second differences, so it is a
//! lower bound for the continuous capacity. The degree-one value is attained by
//! an admissible function, so it is an upper bound.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{param, Error, Result};
use crate::fourier::TrigPoly;
use crate::geometry::{wrap_turn, Arc, CircleSet};
use crate::lp::ipm::{self, IneqLp, IpmOptions, IpmStatus};
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityProblem {
    pub arc: Arc,
    pub k: Option<CircleSet>,
    pub grid_n: usize,
    pub t_levels: Vec<f64>,
    /// Value prescribed at the far endpoint; the near endpoint gets 0.
    pub datum: f64,
    /// Restricts φ to trigonometric polynomials of this degree.
    pub degree_cap: Option<usize>,
}

/// Dyadic levels `2^{-j}` for `j = 2..log2(n)-1`.
pub fn default_t_levels(grid_n: usize) -> Vec<f64> {
    let top = grid_n.trailing_zeros() as i32 - 1;
    (2..=top).map(|j| 2f64.powi(-j)).collect()
}

impl CapacityProblem {
    pub fn new(arc: Arc, k: Option<CircleSet>, grid_n: usize) -> Result<Self> {
        let p = Self { arc, k, grid_n, t_levels: default_t_levels(grid_n), datum: 1.0, degree_cap: None };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.grid_n;
        if n < 256 || !n.is_power_of_two() {
            return param(format!("grid_n = {n} must be a power of two >= 256"));
        }
        if self.t_levels.is_empty() {
            return param("at least one t level is required");
        }
        for &t in &self.t_levels {
            let k = t * n as f64;
            if !(t > 0.0 && t <= 0.5) || k.fract() != 0.0 {
                return param(format!("t = {t} must lie in (0, 1/2] on the grid of size {n}"));
            }
        }
        if self.arc.is_full() || self.arc.length() <= 0.0 {
            return param("capacity needs a proper arc");
        }
        if let Some(d) = self.degree_cap {
            if d == 0 || 4 * d + 2 > n {
                return param(format!("degree cap {d} must lie in 1..{} for grid size {n}", n / 4));
            }
        }
        if !self.datum.is_finite() {
            return param("endpoint datum must be finite");
        }
        let (a, b, _) = self.endpoints();
        if a == b {
            return param("arc endpoints snap to the same grid point");
        }
        Ok(())
    }

    /// Grid indices of the two endpoints and the larger snap distance in turns.
    pub fn endpoints(&self) -> (usize, usize, f64) {
        let n = self.grid_n as f64;
        let snap = |x: f64| {
            let i = (wrap_turn(x) * n).round();
            (i as usize % self.grid_n, (wrap_turn(x) * n - i).abs() / n)
        };
        let (a, da) = snap(self.arc.start());
        let (b, db) = snap(self.arc.stop());
        (a, b, da.max(db))
    }
}

/// `φ_i = constant + sign·x[var]`, or a fixed constant.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Slot {
    Fixed(f64),
    Var { var: usize, sign: f64, offset: f64 },
}

impl Slot {
    fn value(&self, x: &[f64]) -> f64 {
        match *self {
            Slot::Fixed(c) => c,
            Slot::Var { var, sign, offset } => offset + sign * x[var],
        }
    }
}

struct Layout {
    slots: Vec<Slot>,
    vars: usize,
    /// Indices whose constraints are imposed (one per mirror pair when symmetric).
    rows: Vec<usize>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut j = i;
        while self.0[j] != r {
            let next = self.0[j];
            self.0[j] = r;
            j = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Maps grid points to LP variables, or explains why the problem is infeasible.
const SHARED_RUN: &str = "both endpoints of the arc lie in one run of K, where the function must be constant";

/// Consecutive grid pairs `(i, i+1)` that both lie in K.
fn run_links(p: &CapacityProblem) -> Vec<usize> {
    let n = p.grid_n;
    let Some(k) = &p.k else { return Vec::new() };
    let inside: Vec<bool> = (0..n).map(|i| k.contains(i as f64 / n as f64)).collect();
    (0..n).filter(|&i| inside[i] && inside[(i + 1) % n]).collect()
}

fn layout(p: &CapacityProblem) -> std::result::Result<Layout, String> {
    let n = p.grid_n;
    let (a, b, _) = p.endpoints();
    let mut uf = UnionFind((0..n).collect());
    let links = run_links(p);
    let constrained = !links.is_empty();
    for &i in &links {
        uf.union(i, (i + 1) % n);
    }
    if uf.find(a) == uf.find(b) {
        return Err(SHARED_RUN.into());
    }
    if !constrained {
        // Without constant runs the problem is invariant under φ ↦ datum − φ∘σ,
        // σ the reflection swapping the endpoints, so a symmetric optimizer exists.
        let sigma = |i: usize| (a + b + n - i % n) % n;
        let mut slots = vec![Slot::Fixed(0.0); n];
        let mut rows = Vec::new();
        let mut vars = 0;
        for i in 0..n {
            let m = sigma(i);
            if i > m {
                continue;
            }
            rows.push(i);
            if i == a || i == b {
                slots[a] = Slot::Fixed(0.0);
                slots[b] = Slot::Fixed(p.datum);
            } else if i == m {
                slots[i] = Slot::Fixed(0.5 * p.datum);
            } else {
                slots[i] = Slot::Var { var: vars, sign: 1.0, offset: 0.0 };
                slots[m] = Slot::Var { var: vars, sign: -1.0, offset: p.datum };
                vars += 1;
            }
        }
        return Ok(Layout { slots, vars, rows });
    }
    let ra = uf.find(a);
    let rb = uf.find(b);
    let mut var_of = vec![usize::MAX; n];
    let mut vars = 0;
    let mut slots = Vec::with_capacity(n);
    for i in 0..n {
        let r = uf.find(i);
        slots.push(if r == ra {
            Slot::Fixed(0.0)
        } else if r == rb {
            Slot::Fixed(p.datum)
        } else {
            if var_of[r] == usize::MAX {
                var_of[r] = vars;
                vars += 1;
            }
            Slot::Var { var: var_of[r], sign: 1.0, offset: 0.0 }
        });
    }
    Ok(Layout { slots, vars, rows: (0..n).collect() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityResult {
    /// Optimal `s`, or `+∞` when the constraints cannot be met.
    pub value: f64,
    pub phi: Vec<f64>,
    /// Re-verified on the grid: every constraint holds within `1e-9`.
    pub feasible: bool,
    pub max_violation: f64,
    pub converged: bool,
    pub snap_distance: f64,
    pub explanation: Option<String>,
}

impl CapacityResult {
    pub fn is_infinite(&self) -> bool {
        self.value == f64::INFINITY
    }
}

/// `max_{i,t} |Δ₂φ(i, t)| / (2πt)` on the grid.
pub fn grid_zygmund(phi: &[f64], t_levels: &[f64]) -> f64 {
    let n = phi.len();
    t_levels
        .iter()
        .map(|&t| {
            let k = (t * n as f64) as usize % n;
            let m = (0..n)
                .map(|i| (phi[(i + k) % n] + phi[(i + n - k) % n] - 2.0 * phi[i]).abs())
                .fold(0.0, f64::max);
            m / (2.0 * PI * t)
        })
        .fold(0.0, f64::max)
}

fn build_lp(p: &CapacityProblem, lay: &Layout) -> IneqLp {
    let n = p.grid_n;
    let s = lay.vars;
    let mut lp = IneqLp { n: s + 1, c: vec![0.0; s + 1], ..Default::default() };
    lp.c[s] = 1.0;
    for &t in &p.t_levels {
        let k = (t * n as f64) as usize % n;
        let scale = 2.0 * PI * t;
        for &i in &lay.rows {
            let mut constant = 0.0;
            let mut entries: Vec<(usize, f64)> = Vec::with_capacity(4);
            for (idx, w) in [((i + k) % n, 1.0), ((i + n - k) % n, 1.0), (i, -2.0)] {
                match lay.slots[idx] {
                    Slot::Fixed(c) => constant += w * c,
                    Slot::Var { var, sign, offset } => {
                        constant += w * offset;
                        match entries.iter_mut().find(|e| e.0 == var) {
                            Some(e) => e.1 += w * sign,
                            None => entries.push((var, w * sign)),
                        }
                    }
                }
            }
            entries.retain(|e| e.1 != 0.0);
            let mut up = entries.clone();
            up.push((s, -scale));
            lp.push(up, -constant);
            let mut down: Vec<(usize, f64)> = entries.iter().map(|&(v, c)| (v, -c)).collect();
            down.push((s, -scale));
            lp.push(down, constant);
        }
    }
    lp
}

fn infeasible(snap: f64, why: String) -> CapacityResult {
    CapacityResult {
        value: f64::INFINITY,
        phi: Vec::new(),
        feasible: false,
        max_violation: f64::INFINITY,
        converged: true,
        snap_distance: snap,
        explanation: Some(why),
    }
}

/// Trigonometric basis `1, cos 2πkθ, sin 2πkθ` at the grid point `i`.
fn trig_row(d: usize, n: usize, i: usize) -> Vec<f64> {
    let theta = 2.0 * PI * i as f64 / n as f64;
    let mut row = vec![1.0];
    for k in 1..=d {
        row.push((k as f64 * theta).cos());
        row.push((k as f64 * theta).sin());
    }
    row
}

/// Degree-capped variant: φ = G(x_p + N y) with the equalities solved through an SVD.
fn capacity_trig(p: &CapacityProblem, d: usize) -> Result<(Vec<f64>, f64, bool)> {
    let n = p.grid_n;
    let m = 2 * d + 1;
    let (a, b, _) = p.endpoints();
    let basis: Vec<Vec<f64>> = (0..n).map(|i| trig_row(d, n, i)).collect();
    let mut eq: Vec<(Vec<f64>, f64)> = vec![(basis[a].clone(), 0.0), (basis[b].clone(), p.datum)];
    for i in run_links(p) {
        let diff = basis[i].iter().zip(&basis[(i + 1) % n]).map(|(u, v)| u - v).collect();
        eq.push((diff, 0.0));
    }
    let rows = eq.len().max(m);
    let e = faer::Mat::<f64>::from_fn(rows, m, |r, c| eq.get(r).map_or(0.0, |row| row.0[c]));
    let svd = e.thin_svd();
    let sv = svd.s_diagonal();
    let smax = (0..m).map(|j| sv.read(j)).fold(0.0, f64::max);
    let rank = (0..m).filter(|&j| sv.read(j) > 1e-10 * smax).count();
    let (u, v) = (svd.u(), svd.v());
    let mut xp = vec![0.0; m];
    for j in 0..m {
        let sj = sv.read(j);
        if sj <= 1e-10 * smax {
            continue;
        }
        let proj: f64 = eq.iter().enumerate().map(|(r, row)| u.read(r, j) * row.1).sum();
        for (c, x) in xp.iter_mut().enumerate() {
            *x += v.read(c, j) * proj / sj;
        }
    }
    let resid = eq
        .iter()
        .map(|(row, f)| (row.iter().zip(&xp).map(|(g, x)| g * x).sum::<f64>() - f).abs())
        .fold(0.0, f64::max);
    if resid > 1e-8 * (1.0 + p.datum.abs()) {
        return Ok((Vec::new(), f64::INFINITY, true));
    }
    let null: Vec<usize> = (0..m).filter(|&j| sv.read(j) <= 1e-10 * smax).collect();
    debug_assert_eq!(null.len(), m - rank);
    let free = null.len();
    let dot = |i: usize, col: &dyn Fn(usize) -> f64| basis[i].iter().enumerate().map(|(c, g)| g * col(c)).sum::<f64>();
    let base: Vec<f64> = (0..n).map(|i| dot(i, &|c| xp[c])).collect();
    let dirs: Vec<Vec<f64>> = null.iter().map(|&j| (0..n).map(|i| dot(i, &|c| v.read(c, j))).collect()).collect();
    let mut lp = IneqLp { n: free + 1, c: vec![0.0; free + 1], ..Default::default() };
    lp.c[free] = 1.0;
    for &t in &p.t_levels {
        let k = (t * n as f64) as usize % n;
        let scale = 2.0 * PI * t;
        for i in 0..n {
            let d2 = |f: &[f64]| f[(i + k) % n] + f[(i + n - k) % n] - 2.0 * f[i];
            let constant = d2(&base);
            let coefs: Vec<f64> = dirs.iter().map(|dir| d2(dir)).collect();
            for sign in [1.0, -1.0] {
                let mut row: Vec<(usize, f64)> = coefs.iter().enumerate().map(|(j, &c)| (j, sign * c)).collect();
                row.push((free, -scale));
                lp.push(row, -sign * constant);
            }
        }
    }
    let sol = ipm::solve(&lp, IpmOptions::default())?;
    let phi = (0..n).map(|i| base[i] + dirs.iter().zip(&sol.x).map(|(dir, y)| dir[i] * y).sum::<f64>()).collect();
    Ok((phi, sol.x[free], sol.status == IpmStatus::Optimal))
}

pub fn condenser_capacity(p: &CapacityProblem) -> Result<CapacityResult> {
    p.validate()?;
    let (_, _, snap) = p.endpoints();
    let (phi, value, converged) = if let Some(d) = p.degree_cap {
        let (phi, value, converged) = capacity_trig(p, d)?;
        if value.is_infinite() {
            return Ok(infeasible(snap, "the endpoint and run constraints admit no polynomial of this degree".into()));
        }
        (phi, value, converged)
    } else {
        let lay = match layout(p) {
            Ok(l) => l,
            Err(why) => return Ok(infeasible(snap, why)),
        };
        let lp = build_lp(p, &lay);
        let sol = ipm::solve(&lp, IpmOptions::default())?;
        let phi: Vec<f64> = lay.slots.iter().map(|sl| sl.value(&sol.x)).collect();
        (phi, sol.x[lay.vars], sol.status == IpmStatus::Optimal)
    };
    let direct = grid_zygmund(&phi, &p.t_levels);
    let max_violation = (direct - value).max(0.0);
    Ok(CapacityResult {
        value,
        phi,
        feasible: max_violation <= 1e-9 * (1.0 + value.abs()),
        max_violation,
        converged,
        snap_distance: snap,
        explanation: None,
    })
}

/// `sup_{0<t≤1/2} 2(1 − cos 2πt)/(2πt)`, the Zygmund ratio of a unit cosine.
pub fn cosine_zygmund_constant() -> f64 {
    let f = |t: f64| 2.0 * (1.0 - (2.0 * PI * t).cos()) / (2.0 * PI * t);
    let t = golden_section(|t| -f(t), 0.05, 0.5);
    f(t)
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
        if b - a < 1e-15 {
            break;
        }
    }
    0.5 * (a + b)
}

/// Best degree-one `φ = a0 + A cos 2π(θ − c)` with `φ = 0` and `1` at the arc ends.
///
/// For a fixed phase `c` the endpoint equations fix `a0` and `A`; the phase is
/// found by a one-dimensional search and the Zygmund seminorm is `A` times the
/// cosine constant, taken over all `t ∈ (0, 1/2]`.
pub fn capacity_degree1(i: &Arc) -> Result<(f64, TrigPoly)> {
    let len = i.length();
    if !(len > 0.0 && len < 1.0) {
        return param("degree-one capacity needs an arc of length in (0, 1)");
    }
    let (alpha, beta) = (i.start(), i.end());
    let spread = |c: f64| ((2.0 * PI * (beta - c)).cos() - (2.0 * PI * (alpha - c)).cos()).abs();
    // |cos u − cos v| peaks once per half turn of c; search the half turn after the midpoint.
    let mid = 0.5 * (alpha + beta);
    let c = golden_section(|c| -spread(c), mid, mid + 0.5);
    let diff = (2.0 * PI * (beta - c)).cos() - (2.0 * PI * (alpha - c)).cos();
    if diff.abs() < 1e-300 {
        return Err(Error::Numeric("degenerate endpoint system".into()));
    }
    let amp = 1.0 / diff;
    let a0 = -amp * (2.0 * PI * (alpha - c)).cos();
    let rot = Complex64::from_polar(0.5 * amp, -2.0 * PI * c);
    let mut p = TrigPoly::zero(1);
    p.set(0, Complex64::new(a0, 0.0));
    p.set(1, rot);
    p.set(-1, rot.conj());
    Ok((amp.abs() * cosine_zygmund_constant(), p))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapRow {
    pub grid_n: usize,
    pub t_count: usize,
    pub without_k: f64,
    pub with_k: f64,
    pub gap: f64,
    pub converged: bool,
    /// Both solutions passed the direct constraint check; false when K makes the problem infeasible.
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub rows: Vec<GapRow>,
    /// Relative gap at the finest resolution is at most `1e-3`.
    pub k_negligible: bool,
}

pub fn capacity_gap_report(i: &Arc, k: &CircleSet, resolutions: &[usize]) -> Result<GapReport> {
    capacity_gap_report_capped(i, k, resolutions, None)
}

/// [`capacity_gap_report`] over trigonometric polynomials of degree at most `degree_cap`.
pub fn capacity_gap_report_capped(
    i: &Arc,
    k: &CircleSet,
    resolutions: &[usize],
    degree_cap: Option<usize>,
) -> Result<GapReport> {
    if resolutions.is_empty() || resolutions.windows(2).any(|p| p[1] <= p[0]) {
        return param("resolutions must be nonempty and increasing");
    }
    let rows = resolutions
        .par_iter()
        .map(|&n| {
            let base = CapacityProblem { degree_cap, ..CapacityProblem::new(*i, None, n)? };
            base.validate()?;
            let with = CapacityProblem { k: Some(k.clone()), ..base.clone() };
            let (a, b) = (condenser_capacity(&base)?, condenser_capacity(&with)?);
            let gap = if b.value.is_infinite() { f64::INFINITY } else { (b.value - a.value) / a.value };
            Ok(GapRow {
                grid_n: n,
                t_count: base.t_levels.len(),
                without_k: a.value,
                with_k: b.value,
                gap,
                converged: a.converged && b.converged,
                feasible: a.feasible && b.feasible,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let k_negligible = rows.last().is_some_and(|r| r.gap <= 1e-3);
    Ok(GapReport { rows, k_negligible })
}
