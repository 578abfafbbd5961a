//! Numerical toolkit for boundary function theory on the unit disc.
//!
//! Circle sets, weight majorants, trigonometric polynomials, weighted Bloch and
//! Besov-type norms, entropy and content functionals, condenser capacities and
//! the explicit outer/inner function constructions built from them.

pub mod capacity;
pub mod error;
pub mod geometry;
pub mod inner;
pub mod constants;
pub mod constructions;
pub mod disc;
pub mod fourier;
pub mod lp;
pub mod majorant;
pub mod norms;
pub mod quad;
pub mod setfun;

pub use error::{Error, Result};
