//! Inner functions `z^k · B(z) · S(z)` with finite Blaschke and atomic singular factors.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::disc::{DiscFunction, Provenance};
use crate::error::{param, Result};
use crate::geometry::wrap_turn;
use crate::majorant::Majorant;

#[derive(Debug, Clone, PartialEq)]
pub struct InnerFunction {
    monomial: u32,
    /// Nonzero zeros with multiplicities.
    zeros: Vec<(Complex64, u32)>,
    /// Point masses `(angle in turns, mass)` of the singular measure.
    atoms: Vec<(f64, f64)>,
}

/// `1 − |z|²` without cancellation for `|z|` near 1.
fn one_minus_sq(z: Complex64) -> f64 {
    let r = z.norm();
    (1.0 - r) * (1.0 + r)
}

impl InnerFunction {
    pub fn monomial(k: u32) -> Self {
        Self { monomial: k, zeros: Vec::new(), atoms: Vec::new() }
    }

    pub fn identity() -> Self {
        Self::monomial(1)
    }

    /// Finite Blaschke product; zeros at the origin become the monomial factor.
    pub fn blaschke(zeros: &[(Complex64, u32)]) -> Result<Self> {
        let mut out = Self::monomial(0);
        for &(a, m) in zeros {
            if !(a.norm() < 1.0) {
                return param(format!("Blaschke zero {a} not inside the disc"));
            }
            if m == 0 {
                continue;
            }
            if a == Complex64::new(0.0, 0.0) {
                out.monomial += m;
            } else {
                out.zeros.push((a, m));
            }
        }
        Ok(out)
    }

    pub fn atomic_singular(atoms: &[(f64, f64)]) -> Result<Self> {
        if atoms.iter().any(|&(_, mu)| !(mu > 0.0 && mu.is_finite())) {
            return param("singular masses must be positive");
        }
        Ok(Self { monomial: 0, zeros: Vec::new(), atoms: atoms.iter().map(|&(t, m)| (wrap_turn(t), m)).collect() })
    }

    /// Product of two inner functions.
    pub fn times(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.monomial += other.monomial;
        out.zeros.extend_from_slice(&other.zeros);
        out.atoms.extend_from_slice(&other.atoms);
        out
    }

    pub fn zeros(&self) -> &[(Complex64, u32)] {
        &self.zeros
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn monomial_degree(&self) -> u32 {
        self.monomial
    }

    /// `log |θ(z)|²`, accurate when `|θ|` is close to 1.
    pub fn log_abs_sq(&self, z: Complex64) -> f64 {
        let d = one_minus_sq(z);
        let mut acc = 0.0;
        if self.monomial > 0 {
            acc += self.monomial as f64 * (-d).ln_1p();
        }
        for &(a, m) in &self.zeros {
            let q = (1.0 - a.norm_sqr()) * d / (Complex64::new(1.0, 0.0) - a.conj() * z).norm_sqr();
            acc += m as f64 * (-q).ln_1p();
        }
        for &(t, mu) in &self.atoms {
            let zeta = Complex64::from_polar(1.0, 2.0 * PI * t);
            acc -= 2.0 * mu * d / (zeta - z).norm_sqr();
        }
        acc
    }

    /// `1 − |θ(z)|²`.
    pub fn one_minus_abs_sq(&self, z: Complex64) -> f64 {
        -self.log_abs_sq(z).exp_m1()
    }

    /// `(1−|z|)|θ′(z)| / (1−|θ(z)|²)`; `None` when not finite.
    pub fn hyperbolic_derivative(&self, z: Complex64) -> Option<f64> {
        let (_, d) = self.eval(z);
        let v = (1.0 - z.norm()) * d.norm() / self.one_minus_abs_sq(z);
        v.is_finite().then_some(v)
    }

    /// Boundary value at the angle `t`; `None` at a singular atom.
    pub fn boundary(&self, t: f64) -> Option<Complex64> {
        if self.atoms.iter().any(|&(a, _)| wrap_turn(t - a) == 0.0) {
            return None;
        }
        let v = self.value(Complex64::from_polar(1.0, 2.0 * PI * t));
        v.is_finite().then_some(v)
    }
}

impl DiscFunction for InnerFunction {
    fn eval(&self, z: Complex64) -> (Complex64, Complex64) {
        let one = Complex64::new(1.0, 0.0);
        let (mut f, mut df) = if self.monomial == 0 {
            (one, Complex64::new(0.0, 0.0))
        } else {
            let k = self.monomial as i32;
            (z.powi(k), k as f64 * z.powi(k - 1))
        };
        for &(a, m) in &self.zeros {
            let unit = a.norm() / a;
            let den = one - a.conj() * z;
            let b = unit * (a - z) / den;
            let db = unit * (a.norm_sqr() - 1.0) / (den * den);
            let (bm, dbm) = (b.powi(m as i32), m as f64 * b.powi(m as i32 - 1) * db);
            df = df * bm + f * dbm;
            f *= bm;
        }
        if !self.atoms.is_empty() {
            let mut expo = Complex64::new(0.0, 0.0);
            let mut dexpo = Complex64::new(0.0, 0.0);
            for &(t, mu) in &self.atoms {
                let zeta = Complex64::from_polar(1.0, 2.0 * PI * t);
                let den = zeta - z;
                expo -= mu * (zeta + z) / den;
                dexpo -= mu * 2.0 * zeta / (den * den);
            }
            let s = expo.exp();
            df = df * s + f * s * dexpo;
            f *= s;
        }
        (f, df)
    }

    fn provenance(&self) -> Provenance {
        Provenance::Inner
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRow {
    pub r: f64,
    /// Maximum of the weighted hyperbolic derivative over the ring, if any sample was finite.
    pub sup_ratio: Option<f64>,
    /// Set when some samples on the ring overflowed and were skipped.
    pub skipped: bool,
}

/// Angular samples per ring in [`hyperbolic_profile`].
pub const PROFILE_ANGLES: usize = 1024;

/// `max_ζ (1−r)|θ′(rζ)| / ((1−|θ(rζ)|²) w(1−r))` on each ring.
pub fn hyperbolic_profile(theta: &InnerFunction, w: &Majorant, radii: &[f64]) -> Result<Vec<ProfileRow>> {
    if radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
        return param("profile radii must lie in (0, 1)");
    }
    Ok(radii
        .iter()
        .map(|&r| {
            let (best, skipped) = ring_profile(theta, w, r, PROFILE_ANGLES);
            ProfileRow { r, sup_ratio: best, skipped }
        })
        .collect())
}

pub(crate) fn ring_profile(theta: &InnerFunction, w: &Majorant, r: f64, angles: usize) -> (Option<f64>, bool) {
    let scale = 1.0 / w.at(1.0 - r);
    let mut best: Option<f64> = None;
    let mut skipped = false;
    for j in 0..angles {
        let z = Complex64::from_polar(r, 2.0 * PI * j as f64 / angles as f64);
        match theta.hyperbolic_derivative(z) {
            Some(v) => best = Some(best.map_or(v * scale, |b: f64| b.max(v * scale))),
            None => skipped = true,
        }
    }
    (best, skipped)
}
