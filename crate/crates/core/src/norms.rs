//! Grid and quadrature evaluation of the weighted norms and seminorms.
//!
//! Supremum norms are maxima over finite grids and therefore lower bounds of
//! the true suprema. Integral norms carry a convergence flag.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::constants::ZYGMUND_GRID;
use crate::disc::DiscFunction;
use crate::error::{param, Error, Result};
use crate::fourier::TrigPoly;
use crate::geometry::Arc;
use crate::lp::simplex::{self, LpStatus};
use crate::majorant::Majorant;
use crate::quad::GaussLegendre;

/// Rings `r_k = 1 − 2^{-k}` for `k = 1..=k_max` with `2^{k+4}` angles each, plus the center.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RadialAngularGrid {
    k_max: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ring {
    pub k: u32,
    pub radius: f64,
    /// `1 − r`, exact.
    pub depth: f64,
    pub angles: usize,
}

impl Ring {
    pub fn point(&self, j: usize) -> Complex64 {
        let (s, c) = (2.0 * PI * j as f64 / self.angles as f64).sin_cos();
        Complex64::new(self.radius * c, self.radius * s)
    }
}

impl RadialAngularGrid {
    pub fn new(k_max: u32) -> Result<Self> {
        if !(1..=24).contains(&k_max) {
            return param(format!("grid depth {k_max} outside 1..=24"));
        }
        Ok(Self { k_max })
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    pub fn rings(&self) -> Vec<Ring> {
        (1..=self.k_max)
            .map(|k| {
                let depth = 2f64.powi(-(k as i32));
                Ring { k, radius: 1.0 - depth, depth, angles: 1usize << (k + 4) }
            })
            .collect()
    }

    /// All grid points, center first.
    pub fn points(&self) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0)];
        for ring in self.rings() {
            out.extend((0..ring.angles).map(|j| ring.point(j)));
        }
        out
    }

    pub fn id(&self) -> String {
        format!("rag-k{}", self.k_max)
    }
}

/// How a reported value relates to the exact quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    Lower,
    Upper,
    Converged,
    NotConverged,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certificate::Lower => "lower",
            Certificate::Upper => "upper",
            Certificate::Converged => "converged",
            Certificate::NotConverged => "not-converged",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormReport {
    pub name: &'static str,
    pub value: f64,
    pub certified: Certificate,
    pub grid_id: String,
    /// Rings dropped because the evaluator returned non-finite values.
    pub skipped_rings: Vec<u32>,
}

/// `|f(0)| + max_grid (1−|z|)|f′(z)|/w(1−|z|)`.
pub fn bloch_w_norm(f: &dyn DiscFunction, w: &Majorant, grid: &RadialAngularGrid) -> NormReport {
    let (f0, d0) = f.eval(Complex64::new(0.0, 0.0));
    let center = d0.norm() / w.at(1.0);
    let per_ring: Vec<(u32, Option<f64>)> = grid
        .rings()
        .par_iter()
        .map(|ring| {
            let scale = ring.depth / w.at(ring.depth);
            let mut best = 0.0f64;
            for j in 0..ring.angles {
                let d = f.eval(ring.point(j)).1.norm();
                if !d.is_finite() {
                    return (ring.k, None);
                }
                best = best.max(scale * d);
            }
            (ring.k, Some(best))
        })
        .collect();
    let mut sup = if center.is_finite() { center } else { 0.0 };
    let mut skipped = Vec::new();
    for (k, v) in per_ring {
        match v {
            Some(v) => sup = sup.max(v),
            None => skipped.push(k),
        }
    }
    NormReport {
        name: "bloch_w",
        value: f0.norm() + sup,
        certified: Certificate::Lower,
        grid_id: grid.id(),
        skipped_rings: skipped,
    }
}

fn w1a_integral(f: &dyn DiscFunction, w: &Majorant, k_max: u32) -> f64 {
    let rule = GaussLegendre::new(8);
    let mut edges = vec![0.0];
    edges.extend((1..=k_max).map(|k| 1.0 - 2f64.powi(-(k as i32))));
    edges.push(1.0);
    let annuli: Vec<(usize, f64, f64)> = edges.windows(2).enumerate().map(|(j, e)| (j, e[0], e[1])).collect();
    let parts: Vec<f64> = annuli
        .par_iter()
        .map(|&(j, lo, hi)| {
            let k = (j as u32 + 1).min(k_max);
            let n = 1usize << (k + 4);
            let mut acc = 0.0;
            for (rho, wr) in rule.mapped(lo, hi) {
                let mut ang = 0.0;
                for a in 0..n {
                    let (s, c) = (2.0 * PI * (a as f64 + 0.5) / n as f64).sin_cos();
                    ang += f.eval(Complex64::new(rho * c, rho * s)).1.norm();
                }
                acc += wr * 2.0 * rho * w.at(1.0 - rho) * ang / n as f64;
            }
            acc
        })
        .collect();
    parts.iter().sum()
}

/// `|f(0)| + ∫_D |f′| w(1−|z|) dA/π` with a refinement convergence flag.
pub fn w1a_w_norm(f: &dyn DiscFunction, w: &Majorant, grid: &RadialAngularGrid) -> NormReport {
    let f0 = f.value(Complex64::new(0.0, 0.0)).norm();
    let fine = w1a_integral(f, w, grid.k_max());
    let converged = if grid.k_max() > 1 {
        let coarse = w1a_integral(f, w, grid.k_max() - 1);
        (fine - coarse).abs() <= 1e-3 * (f0 + fine).max(1e-300)
    } else {
        false
    };
    NormReport {
        name: "w1a_w",
        value: f0 + fine,
        certified: if converged { Certificate::Converged } else { Certificate::NotConverged },
        grid_id: grid.id(),
        skipped_rings: Vec::new(),
    }
}

/// Step function constant on the dyadic arcs `[j2^{-D}, (j+1)2^{-D})`.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicStep {
    depth: u32,
    values: Vec<f64>,
}

impl DyadicStep {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        if n == 0 || !n.is_power_of_two() {
            return param("dyadic step needs 2^D values");
        }
        if values.iter().any(|v| !v.is_finite()) {
            return param("dyadic step values must be finite");
        }
        Ok(Self { depth: n.trailing_zeros(), values })
    }

    pub fn zero(depth: u32) -> Self {
        Self { depth, values: vec![0.0; 1 << depth] }
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn at(&self, theta: f64) -> f64 {
        let n = self.values.len();
        let j = ((crate::geometry::wrap_turn(theta) * n as f64) as usize).min(n - 1);
        self.values[j]
    }

    /// The same function on a finer dyadic grid.
    pub fn refine(&self, depth: u32) -> Result<Self> {
        if depth < self.depth {
            return param("cannot refine to a coarser depth");
        }
        let rep = 1usize << (depth - self.depth);
        Ok(Self { depth, values: self.values.iter().flat_map(|&v| std::iter::repeat(v).take(rep)).collect() })
    }

    pub fn combine(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        let d = self.depth.max(other.depth);
        let a = self.refine(d).expect("finer depth");
        let b = other.refine(d).expect("finer depth");
        Self { depth: d, values: a.values.iter().zip(&b.values).map(|(&x, &y)| f(x, y)).collect() }
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self { depth: self.depth, values: self.values.iter().map(|v| v * k).collect() }
    }

    /// Fourier coefficients `ĝ(n)` for `|n| ≤ degree`, exact for the step function.
    pub fn fourier(&self, degree: usize) -> TrigPoly {
        let n = self.values.len() as f64;
        TrigPoly::from_fn(degree, |k| {
            if k == 0 {
                return Complex64::new(self.mean(), 0.0);
            }
            let kf = k as f64;
            // ∫_a^b e^{-2πikθ}dθ = (e^{-2πika} − e^{-2πikb}) / (2πik)
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &v) in self.values.iter().enumerate() {
                if v == 0.0 {
                    continue;
                }
                let a = j as f64 / n;
                let b = (j + 1) as f64 / n;
                let ea = Complex64::from_polar(1.0, -2.0 * PI * kf * a);
                let eb = Complex64::from_polar(1.0, -2.0 * PI * kf * b);
                acc += v * (ea - eb);
            }
            acc / Complex64::new(0.0, 2.0 * PI * kf)
        })
    }

    /// Cell averages of a trigonometric polynomial over the depth-`depth` grid.
    pub fn cell_averages(p: &TrigPoly, depth: u32) -> Result<Self> {
        let n = 1usize << depth;
        let d = p.degree() as i64;
        let values = (0..n)
            .map(|j| {
                let a = j as f64 / n as f64;
                let b = (j + 1) as f64 / n as f64;
                let mut acc = p.coeff(0);
                for k in (-d..=d).filter(|&k| k != 0) {
                    let kf = k as f64;
                    let ea = Complex64::from_polar(1.0, 2.0 * PI * kf * a);
                    let eb = Complex64::from_polar(1.0, 2.0 * PI * kf * b);
                    acc += p.coeff(k) * (eb - ea) / Complex64::new(0.0, 2.0 * PI * kf) * n as f64;
                }
                acc.re
            })
            .collect();
        Self::new(values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesovReport {
    pub value: f64,
    /// Set when `g` had nonzero mean and the primitive was taken of `g − mean`.
    pub mean_removed: bool,
    pub error_estimate: f64,
}

struct Primitive {
    knots: Vec<f64>,
    slopes: Vec<f64>,
    h: f64,
}

impl Primitive {
    fn at(&self, x: f64) -> f64 {
        let n = self.slopes.len();
        let x = crate::geometry::wrap_turn(x);
        let j = ((x * n as f64) as usize).min(n - 1);
        self.knots[j] + self.slopes[j] * (x - j as f64 * self.h)
    }

    fn delta2(&self, zeta: f64, t: f64) -> f64 {
        self.at(zeta + t) + self.at(zeta - t) - 2.0 * self.at(zeta)
    }

    /// `∫_0^1 |Δ₂(G, t)(ζ)| dζ`, exact for piecewise-linear `G`.
    fn l1_second_difference(&self, t: f64) -> f64 {
        let n = self.slopes.len();
        let h = self.h;
        let mut offs = [(t / h).fract() * h, ((-t / h).rem_euclid(1.0)) * h];
        offs.sort_by(f64::total_cmp);
        let mut total = 0.0;
        for j in 0..n {
            let base = j as f64 * h;
            let mut pts = [base, base + offs[0], base + offs[1], base + h];
            pts[1] = pts[1].clamp(base, base + h);
            pts[2] = pts[2].clamp(base, base + h);
            let vals = pts.map(|p| self.delta2(p, t));
            for q in 0..3 {
                let len = pts[q + 1] - pts[q];
                if len <= 0.0 {
                    continue;
                }
                total += abs_linear_integral(vals[q], vals[q + 1], len);
            }
        }
        total
    }
}

fn abs_linear_integral(a: f64, b: f64, len: f64) -> f64 {
    if a * b >= 0.0 {
        0.5 * (a.abs() + b.abs()) * len
    } else {
        0.5 * (a * a + b * b) / (a.abs() + b.abs()) * len
    }
}

/// `∫_0^1 ∫ |Δ₂(G,t)(ζ)| dm(ζ) dt/t²` for the periodic primitive `G` of `g − mean(g)`.
pub fn besov_b1_seminorm(g: &DyadicStep) -> Result<BesovReport> {
    if g.depth() > 14 {
        return param("Besov seminorm supports depth ≤ 14");
    }
    let n = g.values().len();
    let mean = g.mean();
    let scale = g.values().iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mean_removed = mean.abs() > 1e-14 * scale.max(1e-300);
    let h = 1.0 / n as f64;
    let slopes: Vec<f64> = g.values().iter().map(|v| v - mean).collect();
    let mut knots = vec![0.0; n];
    for j in 1..n {
        knots[j] = knots[j - 1] + slopes[j - 1] * h;
    }
    let prim = Primitive { knots, slopes, h };
    let jumps: f64 = (0..n).map(|j| (prim.slopes[j] - prim.slopes[(j + n - 1) % n]).abs()).sum();
    let a = 0.5 * h;
    // I(t) = t²·Σ|jumps| for t ≤ h/2, and I(1 − t) = I(t).
    let near_zero = a * jumps;
    let near_one = jumps * (1.0 / (1.0 - a) + 2.0 * (1.0 - a).ln() - 1.0 + a);
    let panels = (n - 1).min(1024).max(1);
    let width = (0.5 - a) / panels as f64;
    let hi_rule = GaussLegendre::new(8);
    let lo_rule = GaussLegendre::new(4);
    let weight = |t: f64| 1.0 / (t * t) + 1.0 / ((1.0 - t) * (1.0 - t));
    let (mut fine, mut coarse) = (0.0, 0.0);
    if n > 1 {
        let pieces: Vec<(f64, f64)> = (0..panels)
            .into_par_iter()
            .map(|p| {
                let lo = a + p as f64 * width;
                let f = hi_rule.integrate(lo, lo + width, |t| prim.l1_second_difference(t) * weight(t));
                let c = lo_rule.integrate(lo, lo + width, |t| prim.l1_second_difference(t) * weight(t));
                (f, c)
            })
            .collect();
        for (f, c) in pieces {
            fine += f;
            coarse += c;
        }
    }
    Ok(BesovReport {
        value: near_zero + near_one + fine,
        mean_removed,
        error_estimate: (fine - coarse).abs(),
    })
}

/// `max_{ζ, t} |φ(ζ+t) + φ(ζ−t) − 2φ(ζ)| / (2πt)` over a 4096-point grid.
pub fn zygmund_seminorm(phi: &TrigPoly, t_grid: &[f64]) -> Result<f64> {
    if t_grid.is_empty() {
        return param("empty t grid");
    }
    if t_grid.iter().any(|&t| !(t > 0.0 && t <= 0.5)) {
        return param("t values must lie in (0, 1/2]");
    }
    if !phi.is_real(1e-12) {
        return Err(Error::Domain("Zygmund seminorm needs a real function".into()));
    }
    let m = ZYGMUND_GRID;
    let vals: Vec<f64> = phi.sample(m).iter().map(|c| c.re).collect();
    let best = t_grid
        .par_iter()
        .map(|&t| {
            let k = t * m as f64;
            let mut best = 0.0f64;
            if k.fract() == 0.0 {
                let k = k as usize;
                for i in 0..m {
                    let d = vals[(i + k) % m] + vals[(i + m - k % m) % m] - 2.0 * vals[i];
                    best = best.max(d.abs());
                }
            } else {
                for (i, &v) in vals.iter().enumerate() {
                    let z = i as f64 / m as f64;
                    let d = phi.eval_real(z + t) + phi.eval_real(z - t) - 2.0 * v;
                    best = best.max(d.abs());
                }
            }
            best / (2.0 * PI * t)
        })
        .reduce(|| 0.0, f64::max);
    Ok(best)
}

/// Values of a boundary function at `θ_j = j/n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySamples {
    pub values: Vec<Complex64>,
}

impl BoundarySamples {
    pub fn from_fn(n: usize, f: impl Fn(f64) -> Complex64 + Sync) -> Self {
        Self { values: (0..n).into_par_iter().map(|j| f(j as f64 / n as f64)).collect() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CwReport {
    /// Maximum over sample pairs at distance ≤ 1/8.
    pub near_range: f64,
    /// `8·near_range`, which also dominates pairs further apart.
    pub value: f64,
}

/// `sup |F(ζ) − F(ξ)| / w(|ζ − ξ|)` over sample pairs, in normalized arc length.
pub fn cw_seminorm(f: &BoundarySamples, w: &Majorant) -> Result<CwReport> {
    let n = f.values.len();
    if n < 1024 {
        return param("C_w seminorm needs at least 1024 samples");
    }
    let reach = n / 8;
    let inv_w: Vec<f64> = (0..=reach).map(|d| if d == 0 { 0.0 } else { 1.0 / w.at(d as f64 / n as f64) }).collect();
    let v = &f.values;
    let near = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best = 0.0f64;
            for d in 1..=reach {
                let q = (v[i] - v[(i + d) % n]).norm() * inv_w[d];
                best = best.max(q);
            }
            best
        })
        .reduce(|| 0.0, f64::max);
    Ok(CwReport { near_range: near, value: 8.0 * near })
}

/// A finite combination `c0 + Σ c_n b_n` of special atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicRep {
    pub c0: f64,
    pub terms: Vec<(f64, Arc)>,
}

impl AtomicRep {
    pub fn cost(&self) -> f64 {
        self.c0.abs() + self.terms.iter().map(|(c, _)| c.abs()).sum::<f64>()
    }

    /// `c0 + Σ c_n (1_{I+} − 1_{I−}) / (|I| w(|I|))` on the depth-`depth` grid.
    pub fn reconstruct(&self, w: &Majorant, depth: u32) -> DyadicStep {
        let n = 1usize << depth;
        let mut values = vec![self.c0; n];
        for (c, arc) in &self.terms {
            let len = arc.length();
            let amp = c / (len * w.at(len));
            let first = (arc.start() * n as f64).round() as usize;
            let cells = (len * n as f64).round() as usize;
            for q in 0..cells {
                let sign = if q < cells / 2 { -1.0 } else { 1.0 };
                values[(first + q) % n] += sign * amp;
            }
        }
        DyadicStep { depth, values }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomicReport {
    pub value: f64,
    pub rep: AtomicRep,
    /// Dual objective of the LP; equals `value` at optimality.
    pub dual_bound: f64,
    pub residual: f64,
}

/// Dyadic atoms of generations `1..=depth`: arcs of length `2^{1-k}`.
pub fn dyadic_atoms(depth: u32) -> Vec<Arc> {
    let mut out = Vec::new();
    for k in 1..=depth {
        let count = 1usize << (k - 1);
        let len = 1.0 / count as f64;
        for j in 0..count {
            out.push(Arc::new(j as f64 * len, len).expect("dyadic arc"));
        }
    }
    out
}

/// Minimal `|c0| + Σ|c_n|` over the dyadic dictionary, an upper bound for the atomic norm.
pub fn atomic_bw_upper(g: &DyadicStep, w: &Majorant, dict_depth: u32) -> Result<(f64, AtomicRep)> {
    let r = atomic_bw_report(g, w, dict_depth)?;
    Ok((r.value, r.rep))
}

pub fn atomic_bw_report(g: &DyadicStep, w: &Majorant, dict_depth: u32) -> Result<AtomicReport> {
    if dict_depth < g.depth() {
        return param("dictionary depth must be at least the depth of g");
    }
    if dict_depth > 10 {
        return param("dictionary depth above 10 is not supported");
    }
    let target = g.refine(dict_depth)?;
    let m = 1usize << dict_depth;
    let atoms = dyadic_atoms(dict_depth);
    let cols = atoms.len() + 1;
    // Column layout: (c+, c-) for b0 and then for each atom.
    let mut a = vec![0.0; m * 2 * cols];
    let mut set = |row: usize, col: usize, v: f64| {
        a[row * 2 * cols + 2 * col] = v;
        a[row * 2 * cols + 2 * col + 1] = -v;
    };
    for row in 0..m {
        set(row, 0, 1.0);
    }
    for (k, arc) in atoms.iter().enumerate() {
        let rep = AtomicRep { c0: 0.0, terms: vec![(1.0, *arc)] };
        let col = rep.reconstruct(w, dict_depth);
        for (row, &v) in col.values.iter().enumerate() {
            if v != 0.0 {
                set(row, k + 1, v);
            }
        }
    }
    let cost = vec![1.0; 2 * cols];
    let sol = simplex::solve_standard(&a, target.values(), &cost)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Numeric(format!("atomic LP ended with {:?}", sol.status)));
    }
    let coef = |k: usize| sol.x[2 * k] - sol.x[2 * k + 1];
    let terms: Vec<(f64, Arc)> = atoms
        .iter()
        .enumerate()
        .map(|(k, arc)| (coef(k + 1), *arc))
        .filter(|(c, _)| c.abs() > 1e-14)
        .collect();
    let rep = AtomicRep { c0: coef(0), terms };
    let recon = rep.reconstruct(w, dict_depth);
    let residual = recon
        .values()
        .iter()
        .zip(target.values())
        .fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs()));
    let scale = 1.0 + target.values().iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if residual > 1e-10 * scale {
        return Err(Error::Numeric(format!("atomic reconstruction residual {residual:e}")));
    }
    let dual_bound = sol.duals.iter().zip(target.values()).map(|(y, g)| y * g).sum();
    Ok(AtomicReport { value: rep.cost(), rep, dual_bound, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disc::Polynomial;
    use crate::fourier::outer_from_log_modulus;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn monomial(k: usize) -> Polynomial {
        let mut v = vec![c(0.0); k + 1];
        v[k] = c(1.0);
        Polynomial::new(v)
    }

    #[test]
    fn bloch_examples() {
        let grid = RadialAngularGrid::new(10).unwrap();
        let w = Majorant::constant();
        assert!((bloch_w_norm(&monomial(1), &w, &grid).value - 1.0).abs() < 1e-15);
        assert!((bloch_w_norm(&monomial(2), &w, &grid).value - 0.5).abs() < 1e-15);
        let e = outer_from_log_modulus(&TrigPoly::cos(1)).unwrap();
        let coarse = bloch_w_norm(&e, &w, &grid).value;
        let fine = bloch_w_norm(&e, &w, &RadialAngularGrid::new(14).unwrap()).value;
        assert!(fine >= coarse && (fine - coarse) / fine < 0.01);
    }

    #[test]
    fn w1a_examples() {
        let grid = RadialAngularGrid::new(12).unwrap();
        let w = Majorant::constant();
        let r = w1a_w_norm(&monomial(1), &w, &grid);
        assert!((r.value - 1.0).abs() < 1e-6 && r.certified == Certificate::Converged);
        let r = w1a_w_norm(&Polynomial::constant(c(3.0)), &w, &grid);
        assert_eq!(r.value, 3.0);
        let r = w1a_w_norm(&monomial(2), &w, &grid);
        assert!((r.value - 4.0 / 3.0).abs() < 1e-4, "{}", r.value);
    }

    #[test]
    fn besov_square_wave_closed_form() {
        let g = DyadicStep::new(vec![1.0, -1.0]).unwrap();
        let r = besov_b1_seminorm(&g).unwrap();
        let exact = 12.0 * 3f64.ln() - 16.0 * 2f64.ln();
        assert!(!r.mean_removed);
        assert!((r.value - exact).abs() < 1e-9, "{} vs {exact}", r.value);
        let fine = besov_b1_seminorm(&g.refine(5).unwrap()).unwrap();
        assert!((fine.value - exact).abs() < 1e-9);
        assert_eq!(besov_b1_seminorm(&DyadicStep::zero(4)).unwrap().value, 0.0);
    }

    #[test]
    fn besov_flags_mean() {
        let g = DyadicStep::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let r = besov_b1_seminorm(&g).unwrap();
        assert!(r.mean_removed && r.value > 0.0);
        let deeper = besov_b1_seminorm(&g.refine(8).unwrap()).unwrap();
        assert!((deeper.value - r.value).abs() < 0.01 * r.value);
    }

    #[test]
    fn zygmund_cosine_matches_line_search() {
        let ts: Vec<f64> = (2..=11).map(|j| 2f64.powi(-j)).collect();
        let z = zygmund_seminorm(&TrigPoly::cos(1), &ts).unwrap();
        let oracle = ts.iter().map(|t| 2.0 * (1.0 - (2.0 * PI * t).cos()) / (2.0 * PI * t)).fold(0.0, f64::max);
        assert!((z - oracle).abs() < 1e-12);
        assert_eq!(zygmund_seminorm(&TrigPoly::constant(2.0), &ts).unwrap(), 0.0);
        let z3 = zygmund_seminorm(&TrigPoly::cos(1).scaled(3.0), &ts).unwrap();
        assert!((z3 - 3.0 * z).abs() < 1e-12);
        assert!(zygmund_seminorm(&TrigPoly::cos(1), &[]).is_err());
        let off = zygmund_seminorm(&TrigPoly::cos(1), &[0.3]).unwrap();
        assert!((off - 2.0 * (1.0 - (0.6 * PI).cos()) / (0.6 * PI)).abs() < 1e-9);
    }

    #[test]
    fn cw_examples() {
        let w = Majorant::power(0.5).unwrap();
        let zero = BoundarySamples::from_fn(1024, |_| c(2.0));
        assert_eq!(cw_seminorm(&zero, &w).unwrap().value, 0.0);
        let k = crate::geometry::normalize(&[Arc::new(0.0, 0.25).unwrap()]);
        let f = BoundarySamples::from_fn(2048, |t| c(w.at(k.dist_to(t).unwrap().max(1e-300))));
        let r = cw_seminorm(&f, &w).unwrap();
        assert!(r.value.is_finite() && r.near_range <= 1.0 + 1e-12);
        let f2 = BoundarySamples { values: f.values.iter().map(|v| v * 3.0).collect() };
        assert!((cw_seminorm(&f2, &w).unwrap().value - 3.0 * r.value).abs() < 1e-12);
        assert!(cw_seminorm(&BoundarySamples::from_fn(100, |_| c(0.0)), &w).is_err());
    }

    #[test]
    fn atomic_examples() {
        let w = Majorant::constant();
        let b1 = DyadicStep::new(vec![-1.0, 1.0]).unwrap();
        let (v, rep) = atomic_bw_upper(&b1, &w, 3).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        assert_eq!(rep.terms.len(), 1);
        assert_eq!(rep.terms[0].1, Arc::new(0.0, 1.0).unwrap());
        let five = DyadicStep::new(vec![5.0; 4]).unwrap();
        let (v, rep) = atomic_bw_upper(&five, &w, 2).unwrap();
        assert!((v - 5.0).abs() < 1e-12 && (rep.c0 - 5.0).abs() < 1e-12 && rep.terms.is_empty());
        assert!(atomic_bw_upper(&five, &w, 1).is_err());
    }

    #[test]
    fn atomic_matches_subset_enumeration() {
        // Two disjoint depth-3 atoms with coefficients 1 and 2.
        let w = Majorant::constant();
        let rep = AtomicRep {
            c0: 0.0,
            terms: vec![(1.0, Arc::new(0.0, 0.25).unwrap()), (2.0, Arc::new(0.5, 0.25).unwrap())],
        };
        let g = rep.reconstruct(&w, 3);
        let r = atomic_bw_report(&g, &w, 3).unwrap();
        assert!(r.value <= 3.0 + 1e-12);
        assert!((r.value - r.dual_bound).abs() < 1e-8);
        let brute = brute_force_l1(&g, &w, 3);
        assert!((r.value - brute).abs() < 1e-9, "{} vs {brute}", r.value);
    }

    /// Minimum L1 cost over every subset of the dictionary whose span solves the system.
    fn brute_force_l1(g: &DyadicStep, w: &Majorant, depth: u32) -> f64 {
        let m = 1usize << depth;
        let atoms = dyadic_atoms(depth);
        let mut columns: Vec<Vec<f64>> = vec![vec![1.0; m]];
        for a in &atoms {
            columns.push(AtomicRep { c0: 0.0, terms: vec![(1.0, *a)] }.reconstruct(w, depth).values().to_vec());
        }
        let target = g.refine(depth).unwrap();
        let mut best = f64::INFINITY;
        for mask in 0u32..(1 << columns.len()) {
            let chosen: Vec<usize> = (0..columns.len()).filter(|&j| mask >> j & 1 == 1).collect();
            if let Some(x) = least_squares(&columns, &chosen, target.values()) {
                best = best.min(x.iter().map(|v| v.abs()).sum());
            }
        }
        best
    }

    fn least_squares(cols: &[Vec<f64>], chosen: &[usize], b: &[f64]) -> Option<Vec<f64>> {
        let k = chosen.len();
        let mut ata = vec![vec![0.0; k + 1]; k];
        for (i, &ci) in chosen.iter().enumerate() {
            for (j, &cj) in chosen.iter().enumerate() {
                ata[i][j] = cols[ci].iter().zip(&cols[cj]).map(|(x, y)| x * y).sum();
            }
            ata[i][k] = cols[ci].iter().zip(b).map(|(x, y)| x * y).sum();
        }
        for p in 0..k {
            let piv = (p..k).max_by(|&a, &b| ata[a][p].abs().total_cmp(&ata[b][p].abs()))?;
            if ata[piv][p].abs() < 1e-12 {
                return None;
            }
            ata.swap(p, piv);
            for r in 0..k {
                if r != p {
                    let f = ata[r][p] / ata[p][p];
                    for c in p..=k {
                        ata[r][c] -= f * ata[p][c];
                    }
                }
            }
        }
        let x: Vec<f64> = (0..k).map(|i| ata[i][k] / ata[i][i]).collect();
        let resid = (0..b.len()).fold(0.0f64, |acc, r| {
            let v: f64 = chosen.iter().zip(&x).map(|(&c, xi)| cols[c][r] * xi).sum();
            acc.max((v - b[r]).abs())
        });
        (resid < 1e-9).then_some(x)
    }

    #[test]
    fn step_fourier_and_averages_agree() {
        let g = DyadicStep::new(vec![1.0, -2.0, 0.5, 3.0]).unwrap();
        let p = g.fourier(400);
        let back = DyadicStep::cell_averages(&p, 2).unwrap();
        for (a, b) in back.values().iter().zip(g.values()) {
            assert!((a - b).abs() < 5e-3, "{a} vs {b}");
        }
        assert!((p.coeff(0).re - g.mean()).abs() < 1e-15);
    }
}
