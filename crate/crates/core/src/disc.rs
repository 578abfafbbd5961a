//! Analytic functions on the unit disc given by value-and-derivative evaluators.

use std::sync::Arc as Shared;

use num_complex::Complex64;

/// Where an evaluator came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Poly,
    OuterExp,
    Composition,
    Product,
    Sum,
    Inner,
    Cutoff,
}

/// An analytic function on the disc that reports `f(z)` and `f′(z)`.
pub trait DiscFunction: Send + Sync {
    fn eval(&self, z: Complex64) -> (Complex64, Complex64);

    fn provenance(&self) -> Provenance;

    fn value(&self, z: Complex64) -> Complex64 {
        self.eval(z).0
    }
}

pub type SharedFn = Shared<dyn DiscFunction>;

/// Analytic polynomial `Σ a_n z^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn constant(c: Complex64) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

impl DiscFunction for Polynomial {
    fn eval(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            d = d * z + p;
            p = p * z + c;
        }
        (p, d)
    }

    fn provenance(&self) -> Provenance {
        Provenance::Poly
    }
}

/// `exp(g)`.
#[derive(Clone)]
pub struct Exp {
    pub inner: SharedFn,
    pub tag: Provenance,
}

impl DiscFunction for Exp {
    fn eval(&self, z: Complex64) -> (Complex64, Complex64) {
        let (g, dg) = self.inner.eval(z);
        let e = g.exp();
        (e, dg * e)
    }

    fn provenance(&self) -> Provenance {
        self.tag
    }
}

/// `a + b·g`.
#[derive(Clone)]
pub struct Affine {
    pub a: Complex64,
    pub b: Complex64,
    pub inner: SharedFn,
}

impl DiscFunction for Affine {
    fn eval(&self, z: Complex64) -> (Complex64, Complex64) {
        let (g, dg) = self.inner.eval(z);
        (self.a + self.b * g, self.b * dg)
    }

    fn provenance(&self) -> Provenance {
        Provenance::Sum
    }
}

#[derive(Clone)]
pub struct Sum(pub Vec<SharedFn>);

impl DiscFunction for Sum {
    fn eval(&self, z: Complex64) -> (Complex64, Complex64) {
        self.0.iter().fold((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)), |(v, d), f| {
            let (a, b) = f.eval(z);
            (v + a, d + b)
        })
    }

    fn provenance(&self) -> Provenance {
        Provenance::Sum
    }
}

#[derive(Clone)]
pub struct Product(pub SharedFn, pub SharedFn);

impl DiscFunction for Product {
    fn eval(&self, z: Complex64) -> (Complex64, Complex64) {
        let (f, df) = self.0.eval(z);
        let (g, dg) = self.1.eval(z);
        (f * g, df * g + f * dg)
    }

    fn provenance(&self) -> Provenance {
        Provenance::Product
    }
}

/// `outer ∘ inner`; the inner map is evaluated first.
#[derive(Clone)]
pub struct Compose {
    pub outer: SharedFn,
    pub inner: SharedFn,
}

impl DiscFunction for Compose {
    fn eval(&self, z: Complex64) -> (Complex64, Complex64) {
        let (w, dw) = self.inner.eval(z);
        let (f, df) = self.outer.eval(w);
        (f, df * dw)
    }

    fn provenance(&self) -> Provenance {
        Provenance::Composition
    }
}

pub fn compose(outer: SharedFn, inner: SharedFn) -> SharedFn {
    Shared::new(Compose { outer, inner })
}

pub fn exp(inner: SharedFn) -> SharedFn {
    Shared::new(Exp { inner, tag: Provenance::OuterExp })
}

pub fn affine(a: Complex64, b: Complex64, inner: SharedFn) -> SharedFn {
    Shared::new(Affine { a, b, inner })
}

pub fn product(f: SharedFn, g: SharedFn) -> SharedFn {
    Shared::new(Product(f, g))
}

pub fn sum(terms: Vec<SharedFn>) -> SharedFn {
    Shared::new(Sum(terms))
}

/// Largest relative mismatch between `f′` and a centered difference of `f`.
pub fn derivative_mismatch(f: &dyn DiscFunction, z: Complex64, h: f64) -> f64 {
    let (_, d) = f.eval(z);
    let hx = Complex64::new(h, 0.0);
    let fd = (f.value(z + hx) - f.value(z - hx)) / (2.0 * h);
    (fd - d).norm() / d.norm().max(1e-300)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn polynomial_horner() {
        let p = Polynomial::new(vec![c(1.0, 0.0), c(0.0, 2.0), c(3.0, 0.0)]);
        let z = c(0.3, -0.4);
        let (v, d) = p.eval(z);
        assert!((v - (c(1.0, 0.0) + c(0.0, 2.0) * z + 3.0 * z * z)).norm() < 1e-15);
        assert!((d - (c(0.0, 2.0) + 6.0 * z)).norm() < 1e-15);
    }

    #[test]
    fn combinators_propagate_derivatives() {
        let p: SharedFn = Shared::new(Polynomial::new(vec![c(0.1, 0.0), c(0.5, 0.2), c(0.0, -0.3)]));
        let q: SharedFn = Shared::new(Polynomial::new(vec![c(0.0, 0.0), c(0.7, 0.0), c(0.0, 0.0), c(0.2, 0.0)]));
        let fns: Vec<SharedFn> = vec![
            exp(p.clone()),
            compose(exp(p.clone()), q.clone()),
            product(p.clone(), q.clone()),
            sum(vec![p.clone(), q.clone()]),
            affine(c(1.0, 0.0), c(-1.0, 0.0), exp(q.clone())),
        ];
        for f in &fns {
            for z in [c(0.2, 0.1), c(-0.5, 0.4), c(0.0, -0.8)] {
                assert!(derivative_mismatch(f.as_ref(), z, 1e-5) < 1e-6);
            }
        }
        assert_eq!(fns[1].provenance(), Provenance::Composition);
    }
}
