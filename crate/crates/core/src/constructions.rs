//! Explicit constructions: smooth outer bumps, the Whitney cut-off `exp(−c·h)`,
//! boundary preimages under inner functions and the staged approximation pipeline.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc as Shared;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::disc::{affine, compose, DiscFunction, Provenance, SharedFn};
use crate::error::{param, Error, Result};
use crate::fourier::{dilate_truncate, outer_from_log_modulus, OuterExp, TrigPoly};
use crate::geometry::{whitney, wrap_turn, Arc, CircleSet, WhitneyDecomposition};
use crate::inner::{ring_profile, InnerFunction};
use crate::majorant::{DiniClass, Majorant};
use crate::norms::{bloch_w_norm, cw_seminorm, BoundarySamples, CwReport, RadialAngularGrid};

/// Allowed deviation of `ψ` from `log ε` off the arc `I_δ`.
pub const PLATEAU_TOL: f64 = 1e-3;
/// Largest admissible peak of `ψ`; `exp` overflows shortly above 709.
const MAX_PSI: f64 = 700.0;
/// Radius used for numerical boundary values of inner functions.
pub const BOUNDARY_RADIUS: f64 = 1.0 - 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BumpShape {
    /// Periodized Gaussian of width `h/8`, keeping the mass far from the arc ends.
    Concentrated,
    /// Indicator of `[−h/2, h/2]` smoothed by a Gaussian of width `h/14`.
    Plateau,
}

/// Half-width in turns of `I_δ = {ζ : |ζ − 1| ≤ δ/2}`.
pub fn bump_half_width(delta: f64) -> f64 {
    (0.25 * delta).asin() / PI
}

struct BumpProfile {
    shape: BumpShape,
    mass: f64,
    h: f64,
}

impl BumpProfile {
    fn sigma(&self) -> f64 {
        match self.shape {
            BumpShape::Concentrated => self.h / 8.0,
            BumpShape::Plateau => self.h / 14.0,
        }
    }

    /// Fourier coefficient `φ̂(n)` of the untruncated bump (real and even in `n`).
    fn coeff(&self, n: u64) -> f64 {
        let s = self.sigma();
        let nf = n as f64;
        let gauss = (-2.0 * PI * PI * s * s * nf * nf).exp();
        match self.shape {
            BumpShape::Concentrated => self.mass * gauss,
            BumpShape::Plateau => {
                if n == 0 {
                    self.mass
                } else {
                    let x = PI * nf * self.h;
                    self.mass * x.sin() / x * gauss
                }
            }
        }
    }

    /// `Σ_{|n| > d} |φ̂(n)|`.
    fn tail(&self, d: u64) -> f64 {
        let mut acc = 0.0;
        let mut n = d + 1;
        loop {
            let c = self.coeff(n).abs();
            acc += 2.0 * c;
            let g = (-2.0 * PI * PI * self.sigma().powi(2) * (n as f64).powi(2)).exp();
            if g * self.mass < 1e-18 || n > d + 10_000_000 {
                return acc;
            }
            n += 1;
        }
    }

    /// Bound on the untruncated bump outside `[−h, h]`.
    fn leak(&self) -> f64 {
        let s = self.sigma();
        match self.shape {
            BumpShape::Concentrated => {
                // Gaussian density at 8σ, doubled for the periodic copies.
                2.0 * self.mass / (s * (2.0 * PI).sqrt()) * (-32.0f64).exp()
            }
            BumpShape::Plateau => {
                // Mill's ratio bound on the Gaussian tail beyond 7σ.
                let x = 7.0f64;
                2.0 * self.mass / self.h * (-0.5 * x * x).exp() / (x * (2.0 * PI).sqrt())
            }
        }
    }

    fn min_degree(&self) -> u64 {
        let budget = PLATEAU_TOL - self.leak();
        let mut hi = 1u64;
        while self.tail(hi) > budget {
            hi *= 2;
        }
        let mut lo = hi / 2;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.tail(mid) > budget {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }
}

/// `ψ = log ε + φ` with a nonnegative smooth bump `φ` inside `I_δ`, and its outer function.
#[derive(Debug, Clone)]
pub struct OuterBump {
    pub eps: f64,
    pub delta: f64,
    pub shape: BumpShape,
    pub half_width: f64,
    pub psi: TrigPoly,
    pub outer: OuterExp,
    /// `exp` of the largest sampled value of `ψ`.
    pub n_est: f64,
    /// Upper bound for `sup ψ` including the truncation tail.
    pub psi_peak_bound: f64,
    /// Coefficient mass dropped by the truncation.
    pub tail: f64,
}

impl OuterBump {
    /// The arc `I_δ`, centered at angle 0.
    pub fn arc(&self) -> Arc {
        Arc::new(-self.half_width, 2.0 * self.half_width).expect("half width below 1/2")
    }

    pub fn outer_fn(&self) -> SharedFn {
        Shared::new(self.outer.clone())
    }

    /// `G = 1 − F`.
    pub fn g_fn(&self) -> SharedFn {
        affine(Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0), self.outer_fn())
    }

    /// `1 + sup|F|`, an upper bound for `sup_D |G|`.
    pub fn sup_g_bound(&self) -> f64 {
        1.0 + self.psi_peak_bound.exp()
    }
}

fn check_eps_delta(eps: f64, delta: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return param(format!("eps = {eps} must lie in (0, 1)"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return param(format!("delta = {delta} must lie in (0, 1)"));
    }
    Ok(())
}

/// Smallest degree confining the bump to `I_δ` within [`PLATEAU_TOL`].
pub fn bump_min_degree(eps: f64, delta: f64, shape: BumpShape) -> Result<usize> {
    check_eps_delta(eps, delta)?;
    let p = BumpProfile { shape, mass: -eps.ln(), h: bump_half_width(delta) };
    Ok(p.min_degree() as usize)
}

pub fn build_bump(eps: f64, delta: f64, degree: usize) -> Result<OuterBump> {
    build_bump_shaped(eps, delta, degree, BumpShape::Concentrated)
}

pub fn build_bump_shaped(eps: f64, delta: f64, degree: usize, shape: BumpShape) -> Result<OuterBump> {
    check_eps_delta(eps, delta)?;
    let h = bump_half_width(delta);
    let prof = BumpProfile { shape, mass: -eps.ln(), h };
    let tail = prof.tail(degree as u64);
    if tail + prof.leak() > PLATEAU_TOL {
        return param(format!(
            "degree {degree} leaves {:.3e} of the bump outside I_delta; use degree >= {}",
            tail + prof.leak(),
            prof.min_degree()
        ));
    }
    let psi = TrigPoly::from_fn(degree, |n| {
        if n == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(prof.coeff(n.unsigned_abs()), 0.0)
        }
    });
    let at_zero = psi.eval_real(0.0);
    let psi_peak_bound = at_zero + 2.0 * tail;
    if psi_peak_bound > MAX_PSI {
        return Err(Error::Numeric(format!(
            "bump peak {psi_peak_bound:.1} overflows exp; increase eps or delta"
        )));
    }
    let m = (8 * (degree + 1)).next_power_of_two().max(1024);
    let peak = psi.sample(m).iter().map(|v| v.re).fold(f64::NEG_INFINITY, f64::max);
    let outer = outer_from_log_modulus(&psi)?;
    Ok(OuterBump { eps, delta, shape, half_width: h, psi, outer, n_est: peak.exp(), psi_peak_bound, tail })
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct CutoffTerm {
    /// Center `ξ_n` in turns.
    center: f64,
    xi_conj: Complex64,
    ell: f64,
    /// `ℓ_n log(1/w(ℓ_n))`.
    coef: f64,
}

/// `f = exp(−c·Σ h_n)` with `h_n(z) = ℓ_n log(1/w(ℓ_n)) / (1 + ℓ_n − ξ̄_n z)` over Whitney arcs.
#[derive(Debug, Clone)]
pub struct KhrushchevCutoff {
    pub k: CircleSet,
    pub w: Majorant,
    pub c: f64,
    pub whitney: WhitneyDecomposition,
    terms: Vec<CutoffTerm>,
    /// Terms skipped because `w(ℓ_n) ≥ 1`.
    pub dropped: usize,
}

impl KhrushchevCutoff {
    /// `Σ h_n` at `(1 − gap)·e^{2πiθ}`, with `1 − ξ̄z` expanded to avoid cancellation.
    pub fn h_polar(&self, gap: f64, theta: f64) -> Complex64 {
        let rho = 1.0 - gap;
        self.terms
            .iter()
            .map(|t| {
                let phi = 2.0 * PI * (theta - t.center);
                let half = (0.5 * phi).sin();
                let den = Complex64::new(gap + t.ell + rho * 2.0 * half * half, -rho * phi.sin());
                t.coef / den
            })
            .sum()
    }

    pub fn f_polar(&self, gap: f64, theta: f64) -> Complex64 {
        (-self.c * self.h_polar(gap, theta)).exp()
    }

    /// `F = f·1_{∂D∖K}` at the boundary angle `θ`.
    pub fn boundary(&self, theta: f64) -> Complex64 {
        if self.k.contains(theta) {
            Complex64::new(0.0, 0.0)
        } else {
            self.f_polar(0.0, theta)
        }
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// `f(0)` summed term by term.
    pub fn value_at_origin(&self) -> f64 {
        (-self.c * self.terms.iter().map(|t| t.coef / (1.0 + t.ell)).sum::<f64>()).exp()
    }
}

impl DiscFunction for KhrushchevCutoff {
    fn eval(&self, z: Complex64) -> (Complex64, Complex64) {
        let one = Complex64::new(1.0, 0.0);
        let (mut h, mut dh) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for t in &self.terms {
            let den = one * (1.0 + t.ell) - t.xi_conj * z;
            h += t.coef / den;
            dh += t.coef * t.xi_conj / (den * den);
        }
        let f = (-self.c * h).exp();
        (f, -self.c * dh * f)
    }

    fn provenance(&self) -> Provenance {
        Provenance::Cutoff
    }
}

pub fn khrushchev_cutoff(k: &CircleSet, w: &Majorant, c: f64, depth: u32) -> Result<KhrushchevCutoff> {
    if !(c > 0.0 && c.is_finite()) {
        return param("cut-off constant c must be positive");
    }
    if depth < 2 {
        return param("cut-off needs Whitney depth >= 2");
    }
    let wd = whitney(k, depth)?;
    let mut terms = Vec::with_capacity(wd.pieces.len());
    let mut dropped = 0;
    for p in &wd.pieces {
        let wl = w.at(p.ell);
        if wl >= 1.0 {
            dropped += 1;
            continue;
        }
        terms.push(CutoffTerm {
            center: p.center,
            xi_conj: Complex64::from_polar(1.0, -2.0 * PI * p.center),
            ell: p.ell,
            coef: -p.ell * wl.ln(),
        });
    }
    Ok(KhrushchevCutoff { k: k.clone(), w: w.clone(), c, whitney: wd, terms, dropped })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StolzRow {
    pub k: u32,
    /// `max |f(z)| / w(1−|z|)` on the ring `|z| = 1 − 2^{-k}` along `∂Γ_K`, if the ring meets it.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutoffReport {
    pub stolz: Vec<StolzRow>,
    /// Fitted `C` in `|F(ζ)| ≤ C·w(dist(ζ, K))^N` over [`gap_adapted_points`].
    pub boundary_constant: f64,
    pub boundary_samples: usize,
    /// Largest `|F|` among samples lying in `K`.
    pub max_on_k: f64,
    pub cw: CwReport,
}

/// Points of `∂Γ_K` (aperture 2) on the ring `|z| = 1 − u`, as angles.
pub fn stolz_boundary_points(k: &CircleSet, u: f64) -> Vec<f64> {
    let s = 3.0 * u * u / (4.0 * (1.0 - u));
    if s >= 1.0 {
        return Vec::new();
    }
    let d = s.sqrt().asin() / PI;
    k.gaps()
        .iter()
        .filter(|g| g.length() > 2.0 * d)
        .flat_map(|g| [wrap_turn(g.start() + d), wrap_turn(g.end() - d)])
        .collect()
}

pub fn stolz_ratios(cut: &KhrushchevCutoff, rings: u32) -> Vec<StolzRow> {
    (1..=rings)
        .map(|k| {
            let u = 2f64.powi(-(k as i32));
            let pts = stolz_boundary_points(&cut.k, u);
            let ratio = (!pts.is_empty()).then(|| {
                pts.iter().map(|&t| cut.f_polar(u, t).norm()).fold(0.0, f64::max) / cut.w.at(u)
            });
            StolzRow { k, ratio }
        })
        .collect()
}

/// True when the last value does not exceed the largest value of the first half by more than 5%.
fn no_growth(values: &[f64]) -> bool {
    if values.len() < 2 {
        return true;
    }
    let head = values[..values.len().div_ceil(2)].iter().copied().fold(0.0, f64::max);
    values[values.len() - 1] <= 1.05 * head
}

/// `|F|/w(s)^N` at distances `s = L·2^{-m}` from the left end of every gap.
fn endpoint_decay(cut: &KhrushchevCutoff, n_power: u32) -> Vec<Vec<f64>> {
    let m_max = cut.whitney.truncation_depth.min(40);
    cut.k
        .gaps()
        .iter()
        .map(|g| {
            (2..=m_max)
                .map(|m| {
                    let s = g.length() * 2f64.powi(-(m as i32));
                    cut.f_polar(0.0, g.start() + s).norm() / cut.w.at(s).powi(n_power as i32)
                })
                .collect()
        })
        .collect()
}

/// Smallest `c` among `candidates` for which the Stolz ratios and the boundary ratios
/// `|F|/w(dist)^N` toward the gap ends show no growth.
pub fn search_cutoff_constant(
    k: &CircleSet,
    w: &Majorant,
    depth: u32,
    n_power: u32,
    rings: u32,
    candidates: &[f64],
) -> Result<Option<(f64, KhrushchevCutoff)>> {
    for &c in candidates {
        let cut = khrushchev_cutoff(k, w, c, depth)?;
        let stolz: Vec<f64> = stolz_ratios(&cut, rings).iter().filter_map(|r| r.ratio).collect();
        if !stolz.iter().all(|v| v.is_finite()) || !no_growth(&stolz) {
            continue;
        }
        if endpoint_decay(&cut, n_power).iter().all(|row| no_growth(row)) {
            return Ok(Some((c, cut)));
        }
    }
    Ok(None)
}

pub fn verify_cutoff_estimates(
    cut: &KhrushchevCutoff,
    n_power: u32,
    samples: usize,
    rings: u32,
) -> Result<CutoffReport> {
    if n_power < 1 {
        return param("exponent N must be at least 1");
    }
    if samples < 1024 {
        return param("at least 1024 boundary samples are needed");
    }
    let stolz = stolz_ratios(cut, rings);
    let pts = gap_adapted_points(&cut.k, samples);
    let (c, on_k) = pts
        .par_iter()
        .map(|&t| {
            let v = cut.boundary(t).norm();
            if cut.k.contains(t) {
                return (0.0, v);
            }
            let d = cut.k.dist_to(t).expect("nonempty set");
            (v / cut.w.at(d).powi(n_power as i32), 0.0)
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));
    let bs = BoundarySamples::from_fn(samples, |t| cut.boundary(t));
    let cw = cw_seminorm(&bs, &cut.w)?;
    Ok(CutoffReport { stolz, boundary_constant: c, boundary_samples: pts.len(), max_on_k: on_k, cw })
}

/// Half of `n` points on a uniform grid, the other half shared equally among the
/// gaps of `k` so that short gaps are resolved at every sample size.
pub fn gap_adapted_points(k: &CircleSet, n: usize) -> Vec<f64> {
    let uniform = n / 2;
    let mut pts: Vec<f64> = (0..uniform).map(|j| j as f64 / uniform as f64).collect();
    let gaps = k.gaps();
    if !gaps.is_empty() {
        let per = ((n - uniform) / gaps.len()).max(1);
        for g in &gaps {
            pts.extend((0..per).map(|i| wrap_turn(g.start() + g.length() * (i as f64 + 0.5) / per as f64)));
        }
    }
    pts.sort_by(f64::total_cmp);
    pts
}

/// Cells of `{ζ : θ(ρζ) ∈ I}` on `n` equally spaced samples, each cell centered at its sample.
pub fn preimage_set(theta: &InnerFunction, i: &Arc, angular_n: usize) -> Result<CircleSet> {
    Ok(preimage_scan(theta, i, angular_n, |_, _| {})?.0)
}

/// Scans boundary samples once, returning the preimage and calling `off(j, θ(ζ_j))`
/// for samples that land outside `I`.
fn preimage_scan(
    theta: &InnerFunction,
    i: &Arc,
    n: usize,
    mut off: impl FnMut(usize, Complex64),
) -> Result<(CircleSet, usize)> {
    if n < 1024 || !n.is_power_of_two() {
        return param("angular_n must be a power of two >= 1024");
    }
    let vals: Vec<Option<Complex64>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let z = Complex64::from_polar(BOUNDARY_RADIUS, 2.0 * PI * j as f64 / n as f64);
            let v = theta.value(z);
            v.is_finite().then_some(v)
        })
        .collect();
    let mut cells = Vec::new();
    let mut skipped = 0;
    for (j, v) in vals.into_iter().enumerate() {
        let Some(v) = v else {
            skipped += 1;
            continue;
        };
        let angle = wrap_turn(v.arg() / (2.0 * PI));
        if i.contains(angle) {
            cells.push(Arc::new((j as f64 - 0.5) / n as f64, 1.0 / n as f64)?);
        } else {
            off(j, v);
        }
    }
    Ok((CircleSet::from_arcs(&cells), skipped))
}

/// Inner functions supplied to the pipeline, one per stage.
#[derive(Debug, Clone, PartialEq)]
pub enum ThetaFactory {
    Identity,
    /// `z^{k·j}` at stage `j`.
    Monomial { k: u32 },
    /// `z` times zeros `1 − 2^{-m}`, `m = 1..=levels + j`, at `spread` angles per level.
    Ladder { levels: u32, spread: u32 },
    /// `z` times one singular atom at angle 0 of mass `mass·j`.
    Singular { mass: f64 },
}

impl ThetaFactory {
    pub fn make(&self, stage: usize) -> Result<InnerFunction> {
        let j = stage as u32;
        match *self {
            ThetaFactory::Identity => Ok(InnerFunction::identity()),
            ThetaFactory::Monomial { k } => Ok(InnerFunction::monomial(k * j)),
            ThetaFactory::Ladder { levels, spread } => {
                let golden = 0.5 * (5f64.sqrt() - 1.0);
                let mut zeros = vec![(Complex64::new(0.0, 0.0), 1)];
                for m in 1..=levels + j {
                    let r = 1.0 - 2f64.powi(-(m as i32));
                    for s in 0..spread {
                        let t = s as f64 / spread as f64 + m as f64 * golden;
                        zeros.push((Complex64::from_polar(r, 2.0 * PI * t), 1));
                    }
                }
                InnerFunction::blaschke(&zeros)
            }
            ThetaFactory::Singular { mass } => {
                Ok(InnerFunction::identity().times(&InnerFunction::atomic_singular(&[(0.0, mass * j as f64)])?))
            }
        }
    }
}

impl fmt::Display for ThetaFactory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThetaFactory::Identity => f.write_str("identity"),
            ThetaFactory::Monomial { k } => write!(f, "monomial:{k}"),
            ThetaFactory::Ladder { levels, spread } => write!(f, "ladder:{levels},{spread}"),
            ThetaFactory::Singular { mass } => write!(f, "singular:{mass}"),
        }
    }
}

impl FromStr for ThetaFactory {
    type Err = Error;

    /// Parses `identity`, `monomial:k`, `ladder:levels,spread` or `singular:mass`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("unknown inner-function factory {s:?}"));
        if s == "identity" {
            return Ok(ThetaFactory::Identity);
        }
        let (head, rest) = s.split_once(':').ok_or_else(bad)?;
        let nums: Vec<&str> = rest.split(',').map(str::trim).collect();
        match (head, nums.as_slice()) {
            ("monomial", [k]) => {
                let k: u32 = k.parse().map_err(|_| bad())?;
                if k == 0 {
                    return param("monomial factory needs k >= 1");
                }
                Ok(ThetaFactory::Monomial { k })
            }
            ("ladder", [l, sp]) => {
                let levels = l.parse().map_err(|_| bad())?;
                let spread: u32 = sp.parse().map_err(|_| bad())?;
                if spread == 0 {
                    return param("ladder factory needs spread >= 1");
                }
                Ok(ThetaFactory::Ladder { levels, spread })
            }
            ("singular", [m]) => {
                let mass: f64 = m.parse().map_err(|_| bad())?;
                if !(mass > 0.0 && mass.is_finite()) {
                    return param("singular factory needs a positive mass");
                }
                Ok(ThetaFactory::Singular { mass })
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SAOptions {
    pub boundary_samples: usize,
    /// Optional `(r, degree)` for a dilated polynomial truncation of each `f_j`.
    pub polynomial: Option<(f64, usize)>,
}

impl Default for SAOptions {
    fn default() -> Self {
        Self { boundary_samples: 4096, polynomial: None }
    }
}

#[derive(Debug, Clone)]
pub struct SAStage {
    pub j: usize,
    pub eps: f64,
    pub delta: f64,
    pub degree: usize,
    pub n_est: f64,
    /// `ε/(1 + N_est)`.
    pub eta: f64,
    pub profile_sup: f64,
    pub profile_miss: bool,
    pub bloch_norm: f64,
    /// `bloch_norm − |f_j(0)|`, the supremum part of the norm.
    pub bloch_sup_part: f64,
    /// `profile_sup · sup|G_j|`.
    pub schwarz_pick_bound: f64,
    pub sup_dev: f64,
    pub e_set: CircleSet,
    pub skipped_samples: usize,
    pub poly_tail: Option<f64>,
}

impl SAStage {
    pub fn schwarz_pick_ok(&self) -> bool {
        self.bloch_sup_part <= self.schwarz_pick_bound * (1.0 + 1e-6)
    }
}

#[derive(Debug, Clone)]
pub struct SACertificate {
    pub w: Majorant,
    pub stages: Vec<SAStage>,
    pub e_final: CircleSet,
    pub norms_decreasing: bool,
    pub deviations_ok: bool,
    pub no_profile_miss: bool,
}

impl SACertificate {
    pub fn sa_trend(&self) -> bool {
        self.norms_decreasing && self.deviations_ok && self.no_profile_miss
    }
}

/// Weighted hyperbolic derivative maximized over the grid points (center included).
pub fn profile_on_grid(theta: &InnerFunction, w: &Majorant, grid: &RadialAngularGrid) -> f64 {
    let center = theta.hyperbolic_derivative(Complex64::new(0.0, 0.0)).unwrap_or(0.0) / w.at(1.0);
    grid.rings()
        .par_iter()
        .map(|ring| ring_profile(theta, w, ring.radius, ring.angles).0.unwrap_or(0.0))
        .reduce(|| 0.0, f64::max)
        .max(center)
}

fn run_stage(
    j: usize,
    eps: f64,
    delta: f64,
    w: &Majorant,
    theta: InnerFunction,
    grid: &RadialAngularGrid,
    opts: &SAOptions,
) -> Result<SAStage> {
    let degree = bump_min_degree(eps, delta, BumpShape::Plateau)?;
    let bump = build_bump_shaped(eps, delta, degree, BumpShape::Plateau)?;
    let g = bump.g_fn();
    let profile_sup = profile_on_grid(&theta, w, grid);
    let eta = eps / (1.0 + bump.n_est);
    let theta_fn: SharedFn = Shared::new(theta.clone());
    let f = compose(g, theta_fn);
    let report = bloch_w_norm(f.as_ref(), w, grid);
    let f0 = f.value(Complex64::new(0.0, 0.0)).norm();
    let outer = bump.outer.clone();
    let mut sup_dev = 0.0f64;
    let (pre, skipped) = preimage_scan(&theta, &bump.arc(), opts.boundary_samples, |_, v| {
        // f_j − 1 = −F(θ(ζ)).
        sup_dev = sup_dev.max(outer.value(v).norm());
    })?;
    let poly_tail = match opts.polynomial {
        Some((r, n)) => Some(dilate_truncate(f.as_ref(), r, n, None)?.tail_bound),
        None => None,
    };
    Ok(SAStage {
        j,
        eps,
        delta,
        degree,
        n_est: bump.n_est,
        eta,
        profile_sup,
        profile_miss: profile_sup > eta,
        bloch_norm: report.value,
        bloch_sup_part: report.value - f0,
        schwarz_pick_bound: profile_sup * bump.sup_g_bound(),
        sup_dev,
        e_set: pre.complement(),
        skipped_samples: skipped,
        poly_tail,
    })
}

pub fn sa_pipeline(
    w: &Majorant,
    stages: &[(f64, f64)],
    factory: &ThetaFactory,
    grid: &RadialAngularGrid,
    opts: &SAOptions,
) -> Result<SACertificate> {
    if stages.is_empty() {
        return param("the pipeline needs at least one stage");
    }
    if w.classify_square_dini() == DiniClass::Convergent {
        return Err(Error::Domain(format!("{w} satisfies the square-Dini condition; the pipeline needs it to fail")));
    }
    let thetas = (1..=stages.len()).map(|j| factory.make(j)).collect::<Result<Vec<_>>>()?;
    let done: Vec<SAStage> = stages
        .par_iter()
        .zip(thetas)
        .enumerate()
        .map(|(i, (&(eps, delta), theta))| run_stage(i + 1, eps, delta, w, theta, grid, opts))
        .collect::<Result<Vec<_>>>()?;
    let e_final = done.iter().skip(1).fold(done[0].e_set.clone(), |acc, s| acc.intersection(&s.e_set));
    let norms_decreasing = done.windows(2).all(|p| p[1].bloch_norm < p[0].bloch_norm);
    let deviations_ok = done.iter().all(|s| s.sup_dev <= 1.0 / s.j as f64);
    let no_profile_miss = done.iter().all(|s| !s.profile_miss);
    Ok(SACertificate { w: w.clone(), stages: done, e_final, norms_decreasing, deviations_ok, no_profile_miss })
}

/// Default stage ladder `(ε_j, δ_j)`.
pub fn default_stages() -> Vec<(f64, f64)> {
    vec![(0.5, 0.25), (1.0 / 3.0, 0.125), (0.25, 0.0625)]
}
