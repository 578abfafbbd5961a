//! Finite unions of arcs on the unit circle.
//!
//! Angles are fractions of a full turn in `[0, 1)` and lengths are normalized
//! Lebesgue measure, so the whole circle has length 1. An arc stores both of its
//! endpoints; the end may exceed 1 when the arc wraps through angle 0. Keeping
//! endpoints rather than lengths makes complements and re-complements exact.

mod cantor;
mod symdiff;
mod whitney;

pub use cantor::{cantor_generator, CantorKind, CantorSpec};
pub use symdiff::{symcond_integral, symm_diff_measure, SymcondIntegral};
pub use whitney::{whitney, WhitneyDecomposition, WhitneyPiece};

use std::fmt;
use std::str::FromStr;

use crate::error::{param, Error, Result};

/// Reduce an angle to `[0, 1)`.
pub fn wrap_turn(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// A closed arc from `start` counter-clockwise to `stop`.
///
/// Both endpoints are stored reduced to `[0, 1)`, so taking gaps of a set only
/// copies endpoints and never rounds them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    start: f64,
    stop: f64,
    full: bool,
}

impl Arc {
    /// Arc of the given length starting at `start` (reduced mod 1).
    pub fn new(start: f64, length: f64) -> Result<Self> {
        if !start.is_finite() || !length.is_finite() {
            return param("arc parameters must be finite");
        }
        if length <= 0.0 || length > 1.0 {
            return param(format!("arc length {length} outside (0, 1]"));
        }
        if length >= 1.0 {
            return Ok(Self::full());
        }
        let s = wrap_turn(start);
        Ok(Self::raw(s, wrap_turn(s + length)))
    }

    /// Arc from `start` to `end` with `start < end <= start + 1`.
    pub fn from_endpoints(start: f64, end: f64) -> Result<Self> {
        let len = end - start;
        if !(len > 0.0 && len <= 1.0) {
            return param(format!("arc endpoints {start}, {end} do not span (0, 1]"));
        }
        if len >= 1.0 {
            return Ok(Self::full());
        }
        Ok(Self::raw(wrap_turn(start), wrap_turn(end)))
    }

    fn raw(start: f64, stop: f64) -> Self {
        Self { start, stop, full: false }
    }

    pub fn full() -> Self {
        Self { start: 0.0, stop: 0.0, full: true }
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    /// End angle reduced to `[0, 1)`.
    pub fn stop(&self) -> f64 {
        self.stop
    }

    /// End angle on the lifted line; lies in `(start, start + 1]`.
    pub fn end(&self) -> f64 {
        if self.full || self.stop <= self.start {
            self.stop + 1.0
        } else {
            self.stop
        }
    }

    pub fn length(&self) -> f64 {
        if self.full {
            1.0
        } else if self.stop > self.start {
            self.stop - self.start
        } else {
            self.stop + (1.0 - self.start)
        }
    }

    pub fn is_full(&self) -> bool {
        self.full
    }

    pub fn center(&self) -> f64 {
        wrap_turn(self.start + 0.5 * self.length())
    }

    /// Membership of the closed arc.
    pub fn contains(&self, p: f64) -> bool {
        self.full || wrap_turn(p - self.start) <= self.length()
    }

    /// Distance from `p` to the closed arc in normalized arc length.
    pub fn distance(&self, p: f64) -> f64 {
        if self.full {
            return 0.0;
        }
        let d = wrap_turn(p - self.start);
        let len = self.length();
        if d <= len {
            0.0
        } else {
            (d - len).min(1.0 - d)
        }
    }

    /// The arc rotated by `t` turns.
    pub fn rotated(&self, t: f64) -> Self {
        if self.full {
            return *self;
        }
        Self::raw(wrap_turn(self.start + t), wrap_turn(self.stop + t))
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{})", self.start, self.length())
    }
}

/// Endpoint convention of a set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Closure {
    Closed,
    Open,
}

/// A normalized finite union of arcs.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleSet {
    arcs: Vec<Arc>,
    closure: Closure,
}

impl Default for CircleSet {
    fn default() -> Self {
        Self::empty()
    }
}

/// Sort, merge touching or overlapping arcs, and fuse the arcs meeting at 0.
pub fn normalize(arcs: &[Arc]) -> CircleSet {
    CircleSet::from_arcs(arcs)
}

impl CircleSet {
    pub fn empty() -> Self {
        Self { arcs: Vec::new(), closure: Closure::Closed }
    }

    pub fn full() -> Self {
        Self { arcs: vec![Arc::full()], closure: Closure::Closed }
    }

    pub fn from_arcs(arcs: &[Arc]) -> Self {
        Self::from_segments(arcs.iter().flat_map(|a| split(a)).flatten().collect())
    }

    /// Build from segments of `[0, 1]` (unsorted, possibly overlapping).
    fn from_segments(mut segs: Vec<(f64, f64)>) -> Self {
        segs.retain(|&(a, b)| b > a);
        if segs.is_empty() {
            return Self::empty();
        }
        segs.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(segs.len());
        for (a, b) in segs {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        if merged.len() == 1 && merged[0].0 <= 0.0 && merged[0].1 >= 1.0 {
            return Self::full();
        }
        let n = merged.len();
        if n > 1 && merged[0].0 <= 0.0 && merged[n - 1].1 >= 1.0 {
            let first = merged.remove(0);
            let last = merged.pop().unwrap();
            let mut arcs: Vec<Arc> = merged.into_iter().map(|(a, b)| Arc::raw(a, wrap_turn(b))).collect();
            arcs.push(Arc::raw(last.0, first.1));
            return Self { arcs, closure: Closure::Closed };
        }
        let arcs = merged.into_iter().map(|(a, b)| Arc::raw(a, wrap_turn(b))).collect();
        Self { arcs, closure: Closure::Closed }
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn closure(&self) -> Closure {
        self.closure
    }

    pub fn with_closure(mut self, closure: Closure) -> Self {
        self.closure = closure;
        self
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.arcs.len() == 1 && self.arcs[0].is_full()
    }

    pub fn measure(&self) -> f64 {
        self.arcs.iter().map(Arc::length).sum()
    }

    /// Segments of `[0, 1]` covering the set, wrapping arcs split at 0.
    pub fn segments(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = self.arcs.iter().flat_map(split).flatten().collect();
        out.sort_by(|x, y| x.0.total_cmp(&y.0));
        out
    }

    /// Membership honoring the endpoint convention.
    pub fn contains(&self, p: f64) -> bool {
        let p = wrap_turn(p);
        self.arcs.iter().any(|a| {
            if a.is_full() {
                return true;
            }
            let d = wrap_turn(p - a.start);
            match self.closure {
                Closure::Closed => d <= a.length(),
                Closure::Open => d > 0.0 && d < a.length(),
            }
        })
    }

    /// The gaps of the set; gaps of a closed set are open and vice versa.
    pub fn complement(&self) -> Self {
        let flipped = match self.closure {
            Closure::Closed => Closure::Open,
            Closure::Open => Closure::Closed,
        };
        if self.arcs.is_empty() {
            return Self::full().with_closure(flipped);
        }
        if self.is_full() {
            return Self::empty().with_closure(flipped);
        }
        let m = self.arcs.len();
        let gaps: Vec<Arc> =
            (0..m).map(|i| Arc::raw(self.arcs[i].stop, self.arcs[(i + 1) % m].start)).collect();
        let mut arcs = gaps;
        arcs.sort_by(|x, y| x.start.total_cmp(&y.start));
        Self { arcs, closure: flipped }
    }

    /// Gaps as arcs, in the order of the set's arcs (gap i follows arc i).
    pub fn gaps(&self) -> Vec<Arc> {
        self.complement().arcs
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut all = self.arcs.clone();
        all.extend_from_slice(&other.arcs);
        Self::from_arcs(&all)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let a = self.segments();
        let b = other.segments();
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let lo = a[i].0.max(b[j].0);
            let hi = a[i].1.min(b[j].1);
            if hi > lo {
                out.push((lo, hi));
            }
            if a[i].1 < b[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::from_segments(out)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersection(&other.complement())
    }

    /// The set rotated by `t` turns.
    pub fn rotated(&self, t: f64) -> Self {
        let arcs: Vec<Arc> = self.arcs.iter().map(|a| a.rotated(t)).collect();
        Self::from_arcs(&arcs).with_closure(self.closure)
    }

    /// Distance from `p` to the closure of the set.
    pub fn dist_to(&self, p: f64) -> Result<f64> {
        dist_to_set(p, self)
    }
}

fn split(a: &Arc) -> [Option<(f64, f64)>; 2] {
    if a.full {
        return [Some((0.0, 1.0)), None];
    }
    if a.stop > a.start {
        [Some((a.start, a.stop)), None]
    } else if a.stop == 0.0 {
        [Some((a.start, 1.0)), None]
    } else {
        [Some((a.start, 1.0)), Some((0.0, a.stop))]
    }
}

/// Normalized arc-length distance from `p` to the nearest point of `k`.
pub fn dist_to_set(p: f64, k: &CircleSet) -> Result<f64> {
    if k.is_empty() {
        return Err(Error::Domain("distance to empty set undefined".into()));
    }
    Ok(k.arcs.iter().map(|a| a.distance(p)).fold(f64::INFINITY, f64::min))
}

/// Measure of the collar `{ζ ∉ K : dist(ζ, K) ≤ t}`.
pub fn collar_measure(k: &CircleSet, t: f64) -> Result<f64> {
    if k.is_empty() {
        return Err(Error::Domain("collar of the empty set".into()));
    }
    if !(t >= 0.0) {
        return param("collar width must be nonnegative");
    }
    Ok(k.gaps().iter().map(|g| g.length().min(2.0 * t)).sum())
}

fn parse_num(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("not a number: {:?}", s.trim())))
}

impl FromStr for Arc {
    type Err = Error;

    /// Parses `[start,length)`.
    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("arc literal must look like [start,length): {s:?}")))?;
        let (a, b) = body
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("arc literal needs two numbers: {s:?}")))?;
        Arc::new(parse_num(a)?, parse_num(b)?)
    }
}

impl FromStr for CircleSet {
    type Err = Error;

    /// Parses `{[start,length), ...}`; `{}` is the empty set.
    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("set literal must be braced: {s:?}")))?;
        let mut arcs = Vec::new();
        let mut rest = body.trim();
        while !rest.is_empty() {
            let close = rest
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unterminated arc in {s:?}")))?;
            arcs.push(rest[..=close].parse::<Arc>()?);
            rest = rest[close + 1..].trim_start();
            if let Some(r) = rest.strip_prefix(',') {
                rest = r.trim_start();
            } else if !rest.is_empty() {
                return Err(Error::Parse(format!("expected ',' between arcs in {s:?}")));
            }
        }
        Ok(Self::from_arcs(&arcs))
    }
}

impl fmt::Display for CircleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.arcs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}
