//! Fixed conventions shared across modules.

/// Sign `σ` of the conjugation multiplier `e_n ↦ σ·i·sgn(n)·e_n`.
///
/// Pinned by a principal-value quadrature of the kernel `cot((t−θ)/2)/(2π)`
/// applied to `cos θ`, which returns `−sin θ`; the multiplier with `σ = +1`
/// maps `cos` to `−sin` as well.
pub const HILBERT_SIGN: f64 = 1.0;

/// Number of angular samples used by the Zygmund seminorm.
pub const ZYGMUND_GRID: usize = 4096;
