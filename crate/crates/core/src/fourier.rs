//! Trigonometric polynomials and coefficient-level circle transforms.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;

use crate::constants::HILBERT_SIGN;
use crate::disc::{DiscFunction, Polynomial, Provenance};
use crate::error::{param, Error, Result};
use crate::quad::GaussLegendre;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `Σ_{|n| ≤ N} c_n e^{2πinθ}` with `θ` in turns.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    degree: usize,
    coeffs: Vec<Complex64>,
}

impl TrigPoly {
    pub fn zero(degree: usize) -> Self {
        Self { degree, coeffs: vec![ZERO; 2 * degree + 1] }
    }

    /// From coefficients ordered `c_{-N}, …, c_N`.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() % 2 != 1 {
            return param("coefficient vector must have odd length 2N+1");
        }
        Ok(Self { degree: coeffs.len() / 2, coeffs })
    }

    pub fn from_fn<F: Fn(i64) -> Complex64>(degree: usize, f: F) -> Self {
        let d = degree as i64;
        Self { degree, coeffs: (-d..=d).map(f).collect() }
    }

    pub fn constant(c: f64) -> Self {
        Self { degree: 0, coeffs: vec![Complex64::new(c, 0.0)] }
    }

    /// `cos(2πkθ)`.
    pub fn cos(k: usize) -> Self {
        let mut p = Self::zero(k);
        p.set(k as i64, Complex64::new(0.5, 0.0));
        p.set(-(k as i64), Complex64::new(0.5, 0.0));
        p
    }

    /// `sin(2πkθ)`.
    pub fn sin(k: usize) -> Self {
        let mut p = Self::zero(k);
        p.set(k as i64, Complex64::new(0.0, -0.5));
        p.set(-(k as i64), Complex64::new(0.0, 0.5));
        p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        if n.unsigned_abs() as usize > self.degree {
            return ZERO;
        }
        self.coeffs[(n + self.degree as i64) as usize]
    }

    pub fn set(&mut self, n: i64, c: Complex64) {
        assert!(n.unsigned_abs() as usize <= self.degree, "index beyond degree");
        let i = (n + self.degree as i64) as usize;
        self.coeffs[i] = c;
    }

    /// Coefficients `c_{-N}, …, c_N`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn mean(&self) -> f64 {
        self.coeff(0).re
    }

    fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Whether `c_{-n} = conj(c_n)` within `tol` relative to the largest coefficient.
    pub fn is_real(&self, tol: f64) -> bool {
        let s = self.scale().max(1e-300);
        (0..=self.degree as i64).all(|n| (self.coeff(-n) - self.coeff(n).conj()).norm() <= tol * s)
    }

    pub fn is_analytic(&self) -> bool {
        (1..=self.degree as i64).all(|n| self.coeff(-n) == ZERO)
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        let (s, c) = (2.0 * PI * theta).sin_cos();
        let z = Complex64::new(c, s);
        let zb = z.conj();
        let d = self.degree as i64;
        let mut pos = ZERO;
        for n in (0..=d).rev() {
            pos = pos * z + self.coeff(n);
        }
        let mut neg = ZERO;
        for n in (1..=d).rev() {
            neg = (neg + self.coeff(-n)) * zb;
        }
        pos + neg
    }

    pub fn eval_real(&self, theta: f64) -> f64 {
        self.eval(theta).re
    }

    /// Values at `θ_j = j/m`, `j = 0..m`.
    pub fn sample(&self, m: usize) -> Vec<Complex64> {
        (0..m).map(|j| self.eval(j as f64 / m as f64)).collect()
    }

    pub fn map_coeffs<F: Fn(i64, Complex64) -> Complex64>(&self, f: F) -> Self {
        Self::from_fn(self.degree, |n| f(n, self.coeff(n)))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(self.degree.max(other.degree), |n| self.coeff(n) + other.coeff(n))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(self.degree.max(other.degree), |n| self.coeff(n) - other.coeff(n))
    }

    pub fn scaled(&self, k: f64) -> Self {
        self.map_coeffs(|_, c| c * k)
    }

    /// Part supported on `n ≥ 0`.
    pub fn analytic_part(&self) -> Self {
        self.map_coeffs(|n, c| if n >= 0 { c } else { ZERO })
    }

    /// `c_0 + 2Σ_{n>0} c_n z^n`; its real part on the circle is the input when real.
    pub fn analytic_completion(&self) -> Self {
        self.map_coeffs(|n, c| match n {
            0 => c,
            n if n > 0 => 2.0 * c,
            _ => ZERO,
        })
    }

    /// Coefficients `c_0..c_N` as an analytic polynomial in `z`.
    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::new((0..=self.degree as i64).map(|n| self.coeff(n)).collect())
    }

    /// Serializes as CSV rows `n,re,im` with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,re,im\n");
        for n in -(self.degree as i64)..=self.degree as i64 {
            let c = self.coeff(n);
            out.push_str(&format!("{n},{},{}\n", c.re, c.im));
        }
        out
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            if rec.len() != 3 {
                return Err(Error::Parse("expected rows n,re,im".into()));
            }
            let n: i64 = rec[0].parse().map_err(|_| Error::Parse(format!("bad index {:?}", &rec[0])))?;
            let re: f64 = rec[1].parse().map_err(|_| Error::Parse(format!("bad number {:?}", &rec[1])))?;
            let im: f64 = rec[2].parse().map_err(|_| Error::Parse(format!("bad number {:?}", &rec[2])))?;
            rows.push((n, Complex64::new(re, im)));
        }
        let degree = rows.iter().map(|(n, _)| n.unsigned_abs() as usize).max().unwrap_or(0);
        let mut p = Self::zero(degree);
        for (n, c) in rows {
            p.set(n, c);
        }
        Ok(p)
    }

    pub fn from_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_csv_str(&text)
    }
}

/// Conjugate function: `e_n ↦ σ·i·sgn(n)·e_n`.
pub fn hilbert_transform(u: &TrigPoly) -> Result<TrigPoly> {
    if !u.is_real(1e-12) {
        return Err(Error::Domain("Hilbert transform needs a real-valued input".into()));
    }
    let i = Complex64::new(0.0, HILBERT_SIGN);
    Ok(u.map_coeffs(|n, c| match n.signum() {
        1 => i * c,
        -1 => -i * c,
        _ => ZERO,
    }))
}

/// Cauchy projection: keeps the nonnegative frequencies as an analytic polynomial.
pub fn cauchy_projection(g: &TrigPoly) -> Polynomial {
    g.to_polynomial()
}

/// `F = exp(A)` with `A` the analytic completion of `ψ`.
#[derive(Debug, Clone, PartialEq)]
pub struct OuterExp {
    exponent: Polynomial,
}

impl OuterExp {
    pub fn exponent(&self) -> &Polynomial {
        &self.exponent
    }
}

impl DiscFunction for OuterExp {
    fn eval(&self, z: Complex64) -> (Complex64, Complex64) {
        let (a, da) = self.exponent.eval(z);
        let f = a.exp();
        (f, da * f)
    }

    fn provenance(&self) -> Provenance {
        Provenance::OuterExp
    }
}

pub fn outer_from_log_modulus(psi: &TrigPoly) -> Result<OuterExp> {
    if !psi.is_real(1e-12) {
        return Err(Error::Domain("log-modulus data must be real".into()));
    }
    Ok(OuterExp { exponent: psi.analytic_completion().to_polynomial() })
}

/// Degree-N truncation of `z ↦ f(rz)` with its tail estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct Dilation {
    pub poly: TrigPoly,
    pub tail_bound: f64,
    /// Set when a requested tolerance exceeds the tail estimate.
    pub warning: bool,
}

pub fn dilate_truncate(f: &dyn DiscFunction, r: f64, n: usize, tol: Option<f64>) -> Result<Dilation> {
    if !(r > 0.0 && r < 1.0) {
        return param(format!("dilation radius {r} must lie in (0, 1)"));
    }
    let rho = 0.5 * (1.0 + r);
    let m = 4 * (n + 1);
    let samples: Vec<Complex64> = (0..m)
        .map(|k| {
            let (s, c) = (2.0 * PI * k as f64 / m as f64).sin_cos();
            f.value(Complex64::new(rho * c, rho * s))
        })
        .collect();
    let max_rho = samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut poly = TrigPoly::zero(n);
    for j in 0..=n {
        let mut acc = ZERO;
        for (k, v) in samples.iter().enumerate() {
            let (s, c) = (-2.0 * PI * ((j * k) % m) as f64 / m as f64).sin_cos();
            acc += v * Complex64::new(c, s);
        }
        let a = acc / m as f64 / rho.powi(j as i32);
        poly.set(j as i64, a * r.powi(j as i32));
    }
    let q = r / rho;
    let tail_bound = max_rho * q.powi(n as i32 + 1) / (1.0 - q);
    let warning = tol.is_some_and(|t| tail_bound > t);
    Ok(Dilation { poly, tail_bound, warning })
}

/// Both sides of the Littlewood-Paley identity for analytic polynomials.
///
/// `lhs = Σ f_n conj(g_n) r^{2n}` and
/// `rhs = f(0)conj(g(0)) + 2r² ∫_D f′(rz) conj(g′(rz)) log(1/|z|) dA/π`.
pub fn littlewood_paley_check(f: &TrigPoly, g: &TrigPoly, r: f64) -> Result<(Complex64, Complex64)> {
    if !f.is_analytic() || !g.is_analytic() {
        return param("Littlewood-Paley check needs analytic polynomials");
    }
    if !(r > 0.0 && r < 1.0) {
        return param("r must lie in (0, 1)");
    }
    let deg = f.degree().max(g.degree()) as i64;
    let lhs: Complex64 = (0..=deg).map(|n| f.coeff(n) * g.coeff(n).conj() * r.powi(2 * n as i32)).sum();
    let fp = f.to_polynomial();
    let gp = g.to_polynomial();
    // The angular mean of a trigonometric polynomial of degree < m is exact on m points.
    let m = (4 * deg as usize + 8).next_power_of_two();
    let dirs: Vec<Complex64> = (0..m)
        .map(|k| {
            let (s, c) = (2.0 * PI * k as f64 / m as f64).sin_cos();
            Complex64::new(c, s)
        })
        .collect();
    let angular = |s: f64| -> Complex64 {
        dirs.iter()
            .map(|u| {
                let z = u * (r * s);
                fp.eval(z).1 * gp.eval(z).1.conj()
            })
            .sum::<Complex64>()
            / m as f64
    };
    let rule = GaussLegendre::new(16);
    let mut radial = ZERO;
    let mut hi = 1.0;
    for _ in 0..80 {
        let lo = 0.5 * hi;
        for (s, w) in rule.mapped(lo, hi) {
            radial += angular(s) * (w * 2.0 * s * (1.0 / s).ln());
        }
        hi = lo;
    }
    let rhs = fp.eval(ZERO).0 * gp.eval(ZERO).0.conj() + 2.0 * r * r * radial;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pv_quadrature_pins_the_sign() {
        // H(cos)(θ) = PV ∫ cot((t−θ)/2) cos t dt/2π; symmetrize t = θ ± s.
        let theta = 0.7_f64;
        let rule = GaussLegendre::new(40);
        let pv = rule.integrate(0.0, PI, |s| {
            let cot = 1.0 / (0.5 * s).tan();
            cot * ((theta + s).cos() - (theta - s).cos())
        }) / (2.0 * PI);
        assert!((pv + theta.sin()).abs() < 1e-10);
        let h = hilbert_transform(&TrigPoly::cos(1)).unwrap();
        let at = h.eval_real(theta / (2.0 * PI));
        assert!((at - pv).abs() < 1e-12);
    }

    #[test]
    fn hilbert_identities() {
        assert!(hilbert_transform(&TrigPoly::constant(1.0)).unwrap().coeffs().iter().all(|c| c.norm() == 0.0));
        let u = TrigPoly::cos(3).add(&TrigPoly::sin(1).scaled(2.0)).add(&TrigPoly::constant(0.4));
        let hh = hilbert_transform(&hilbert_transform(&u).unwrap()).unwrap();
        let expect = u.scaled(-1.0).add(&TrigPoly::constant(u.mean()));
        for n in -3..=3 {
            assert!((hh.coeff(n) - expect.coeff(n)).norm() < 1e-15);
        }
        let mut bad = TrigPoly::zero(1);
        bad.set(1, c(1.0, 0.0));
        assert!(hilbert_transform(&bad).is_err());
    }

    #[test]
    fn cauchy_examples() {
        let mut g = TrigPoly::zero(1);
        g.set(-1, c(1.0, 0.0));
        let p = cauchy_projection(&g);
        assert!(p.coeffs().iter().all(|c| c.norm() == 0.0));
        g.set(1, c(1.0, 0.0));
        let z = c(0.3, 0.2);
        assert_eq!(cauchy_projection(&g).eval(z).0, z);
        assert_eq!(cauchy_projection(&TrigPoly::constant(1.0)).eval(z).0, c(1.0, 0.0));
    }

    #[test]
    fn outer_of_cosine_is_exp() {
        let f = outer_from_log_modulus(&TrigPoly::cos(1)).unwrap();
        assert_eq!(f.exponent().coeffs(), &[c(0.0, 0.0), c(1.0, 0.0)]);
        // Taylor coefficients of exp(z) through degree 12.
        let d = dilate_truncate(&f, 0.5, 12, None).unwrap();
        let mut fact = 1.0;
        for n in 0..=12 {
            if n > 0 {
                fact *= n as f64;
            }
            let want = 0.5f64.powi(n) / fact;
            assert!((d.poly.coeff(n as i64) - c(want, 0.0)).norm() < 1e-13, "n = {n}");
        }
        let one = outer_from_log_modulus(&TrigPoly::constant(0.0)).unwrap();
        assert_eq!(one.value(c(0.5, 0.5)), c(1.0, 0.0));
    }

    #[test]
    fn dilation_examples() {
        let zf = Polynomial::new(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let d = dilate_truncate(&zf, 0.5, 3, None).unwrap();
        assert!((d.poly.coeff(1) - c(0.5, 0.0)).norm() < 1e-15);
        assert!(d.poly.coeff(0).norm() < 1e-15 && d.poly.coeff(2).norm() < 1e-15);
        let e = outer_from_log_modulus(&TrigPoly::cos(1)).unwrap();
        let d = dilate_truncate(&e, 0.9, 30, Some(1e-30)).unwrap();
        assert!(d.warning);
        let mut fact = 1.0;
        for n in 0..=30 {
            if n > 0 {
                fact *= n as f64;
            }
            assert!((d.poly.coeff(n) - c(0.9f64.powi(n as i32) / fact, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn littlewood_paley_monomials() {
        let one = TrigPoly::constant(1.0);
        let (l, r) = littlewood_paley_check(&one, &one, 0.9).unwrap();
        assert!((l - r).norm() < 1e-14 && (l - c(1.0, 0.0)).norm() < 1e-15);
        let mut z = TrigPoly::zero(1);
        z.set(1, c(1.0, 0.0));
        let (l, r) = littlewood_paley_check(&z, &z, 0.9).unwrap();
        assert!((l - c(0.81, 0.0)).norm() < 1e-15);
        assert!((l - r).norm() < 1e-10, "{l} {r}");
    }

    #[test]
    fn csv_round_trip() {
        let u = TrigPoly::cos(2).add(&TrigPoly::sin(1));
        assert_eq!(TrigPoly::from_csv_str(&u.to_csv()).unwrap(), u);
    }
}
