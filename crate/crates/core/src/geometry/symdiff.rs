//! Translates of a set and the integral of their symmetric differences.

use super::{wrap_turn, CircleSet};
use crate::error::{param, Result};
use crate::quad::GaussLegendre;

/// Largest component count for which the breakpoint integration is used.
const EXACT_LIMIT: usize = 128;

fn overlap(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let (mut i, mut j, mut acc) = (0, 0, 0.0);
    while i < a.len() && j < b.len() {
        let lo = a[i].0.max(b[j].0);
        let hi = a[i].1.min(b[j].1);
        if hi > lo {
            acc += hi - lo;
        }
        if a[i].1 < b[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    acc
}

fn shifted(segs: &[(f64, f64)], t: f64) -> Vec<(f64, f64)> {
    let t = wrap_turn(t);
    let mut out = Vec::with_capacity(segs.len() + 1);
    for &(a, b) in segs {
        let (s, e) = (a + t, b + t);
        if s >= 1.0 {
            out.push((s - 1.0, e - 1.0));
        } else if e > 1.0 {
            out.push((s, 1.0));
            out.push((0.0, e - 1.0));
        } else {
            out.push((s, e));
        }
    }
    out.sort_by(|x, y| x.0.total_cmp(&y.0));
    out
}

/// Measure of `(E + t) △ E`.
pub fn symm_diff_measure(e: &CircleSet, t: f64) -> f64 {
    if e.is_empty() || e.is_full() {
        return 0.0;
    }
    let segs = e.segments();
    let m = e.measure();
    (2.0 * (m - overlap(&segs, &shifted(&segs, t)))).max(0.0)
}

/// Result of integrating `|(E+t) △ E| / t` over `[t_min, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymcondIntegral {
    pub value: f64,
    /// Always true: the omitted part over `(0, t_min)` is nonnegative.
    pub lower_bound: bool,
    /// True when the integral was evaluated piece by piece between breakpoints.
    pub exact: bool,
    /// Exact contribution of `(0, t_min)` when `t_min` lies below every breakpoint.
    pub small_t_tail: Option<f64>,
}

impl SymcondIntegral {
    /// The full integral over `(0, 1]` when the small-t part is known.
    pub fn limit_value(&self) -> Option<f64> {
        self.small_t_tail.map(|tail| self.value + tail)
    }
}

pub fn symcond_integral(e: &CircleSet, t_min: f64) -> Result<SymcondIntegral> {
    if !(t_min > 0.0 && t_min < 1.0) {
        return param(format!("t_min = {t_min} must lie in (0, 1)"));
    }
    if e.is_empty() || e.is_full() {
        return Ok(SymcondIntegral { value: 0.0, lower_bound: true, exact: true, small_t_tail: Some(0.0) });
    }
    let segs = e.segments();
    let measure = e.measure();
    let g = |t: f64| (2.0 * (measure - overlap(&segs, &shifted(&segs, t)))).max(0.0);
    let mut ends: Vec<f64> = e.arcs().iter().flat_map(|a| [a.start(), a.stop()]).collect();
    ends.sort_by(f64::total_cmp);
    ends.dedup();
    let mut breaks: Vec<f64> = Vec::new();
    for &x in &ends {
        for &y in &ends {
            let d = wrap_turn(x - y);
            if d > 0.0 {
                breaks.push(d);
            }
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let first_break = breaks.first().copied().unwrap_or(1.0);
    let small_t_tail = (t_min <= first_break).then(|| 2.0 * e.len() as f64 * t_min);

    if e.len() > EXACT_LIMIT {
        let value = geometric_panels(&g, t_min);
        return Ok(SymcondIntegral { value, lower_bound: true, exact: false, small_t_tail });
    }

    let mut knots = vec![t_min];
    knots.extend(breaks.into_iter().filter(|&b| b > t_min && b < 1.0));
    knots.push(1.0);
    let vals: Vec<f64> = knots.iter().map(|&t| g(t)).collect();
    let mut value = 0.0;
    for i in 0..knots.len() - 1 {
        let (ta, tb) = (knots[i], knots[i + 1]);
        if tb <= ta {
            continue;
        }
        let slope = (vals[i + 1] - vals[i]) / (tb - ta);
        let intercept = vals[i] - slope * ta;
        value += intercept * (tb / ta).ln() + slope * (tb - ta);
    }
    Ok(SymcondIntegral { value, lower_bound: true, exact: true, small_t_tail })
}

fn geometric_panels<G: Fn(f64) -> f64>(g: &G, t_min: f64) -> f64 {
    let rule = GaussLegendre::new(4);
    let mut total = 0.0;
    let mut hi = 1.0;
    while hi > t_min {
        let lo = (0.5 * hi).max(t_min);
        let n = 64;
        let h = (hi - lo) / n as f64;
        for j in 0..n {
            let a = lo + j as f64 * h;
            total += rule.integrate(a, a + h, |t| g(t) / t);
        }
        hi = lo;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{normalize, Arc};

    fn arc_set(a: f64) -> CircleSet {
        normalize(&[Arc::new(0.0, a).unwrap()])
    }

    #[test]
    fn single_arc_translates() {
        let e = arc_set(0.25);
        assert_eq!(symm_diff_measure(&e, 0.0), 0.0);
        assert!((symm_diff_measure(&e, 0.1) - 0.2).abs() < 1e-15);
        assert!((symm_diff_measure(&e, 0.4) - 0.5).abs() < 1e-15);
        assert!((symm_diff_measure(&e, -0.1) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn single_arc_integral_closed_form() {
        // g(t) = 2t, 2a, 2(1-t) on the three ranges; integrate g/t by hand.
        let a: f64 = 0.25;
        let exact = 2.0 * a * ((1.0 - a) / a).ln() - 2.0 * (1.0 - a).ln();
        let r = symcond_integral(&arc_set(a), 1e-9).unwrap();
        assert!(r.exact && r.lower_bound);
        assert!((r.limit_value().unwrap() - exact).abs() < 1e-12);
        assert!((r.value - (exact - 2.0 * 1e-9)).abs() < 1e-12);
    }

    #[test]
    fn trivial_sets_integrate_to_zero() {
        assert_eq!(symcond_integral(&CircleSet::empty(), 0.01).unwrap().value, 0.0);
        assert_eq!(symcond_integral(&CircleSet::full(), 0.01).unwrap().value, 0.0);
        assert!(symcond_integral(&arc_set(0.2), 0.0).is_err());
    }

    #[test]
    fn panel_quadrature_agrees_with_breakpoints() {
        let e = normalize(&[Arc::new(0.0, 0.1).unwrap(), Arc::new(0.15, 0.1).unwrap()]);
        let segs = e.segments();
        let m = e.measure();
        let g = |t: f64| 2.0 * (m - overlap(&segs, &shifted(&segs, t)));
        let exact = symcond_integral(&e, 1e-3).unwrap().value;
        let approx = geometric_panels(&g, 1e-3);
        assert!((exact - approx).abs() < 1e-5 * exact, "{exact} vs {approx}");
    }
}
