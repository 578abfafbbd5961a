//! Cantor-type test sets built by removing middle gaps from `[0, 1]`.
//!
//! The unit interval is wrapped onto the circle with 0 and 1 identified, so the
//! two outermost pieces fuse into one arc.

use std::fmt;
use std::str::FromStr;

use super::{normalize, Arc, CircleSet};
use crate::error::{param, Error, Result};

const MAX_DEPTH: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CantorKind {
    /// Generation `n` removes `2^n` gaps of length `g0·ratio^n`.
    Fat { g0: f64, ratio: f64 },
    /// Generation `n` removes `2^n` gaps of length `g0·2^{-n}(n+1)^{-exponent}`.
    FatPower { g0: f64, exponent: f64 },
    /// Every interval keeps its two end pieces of relative length `ratio`.
    SelfSimilar { ratio: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CantorSpec {
    pub kind: CantorKind,
    pub depth: u32,
}

impl CantorKind {
    /// Gap length at generation `n` (before any scaling).
    pub fn gap_length(&self, n: u32) -> f64 {
        let nf = n as f64;
        match *self {
            CantorKind::Fat { g0, ratio } => g0 * ratio.powf(nf),
            CantorKind::FatPower { g0, exponent } => g0 * 0.5f64.powf(nf) * (nf + 1.0).powf(-exponent),
            CantorKind::SelfSimilar { ratio } => (1.0 - 2.0 * ratio) * ratio.powf(nf),
        }
    }

    /// Natural log of [`Self::gap_length`], without underflow.
    pub fn ln_gap_length(&self, n: u32) -> f64 {
        let nf = n as f64;
        match *self {
            CantorKind::Fat { g0, ratio } => g0.ln() + nf * ratio.ln(),
            CantorKind::FatPower { g0, exponent } => g0.ln() - nf * 2f64.ln() - exponent * (nf + 1.0).ln(),
            CantorKind::SelfSimilar { ratio } => (1.0 - 2.0 * ratio).ln() + nf * ratio.ln(),
        }
    }

    /// `(count, length)` of the gaps removed at generation `n`.
    pub fn generation(&self, n: u32) -> (f64, f64) {
        (2f64.powi(n as i32), self.gap_length(n))
    }

    fn check_params(&self) -> Result<()> {
        let ok = match *self {
            CantorKind::Fat { g0, ratio } => g0 > 0.0 && g0 < 1.0 && ratio > 0.0 && ratio < 1.0,
            CantorKind::FatPower { g0, exponent } => g0 > 0.0 && g0 < 1.0 && exponent > 0.0,
            CantorKind::SelfSimilar { ratio } => ratio > 0.0 && ratio < 0.5,
        };
        if ok {
            Ok(())
        } else {
            param(format!("invalid Cantor parameters {self}"))
        }
    }

    /// Check that every gap up to `depth` fits inside its parent interval.
    pub fn validate(&self, depth: u32) -> Result<()> {
        self.check_params()?;
        if depth > MAX_DEPTH {
            return param(format!("Cantor depth {depth} exceeds {MAX_DEPTH}"));
        }
        let mut len = 1.0;
        for n in 0..depth {
            let g = self.gap_length(n);
            if g >= len {
                return param(format!(
                    "{self}: generation {n} gap {g} does not fit in intervals of length {len} (negative residual measure)"
                ));
            }
            len = 0.5 * (len - g);
        }
        Ok(())
    }

    /// Measure of the depth-`depth` set.
    pub fn measure(&self, depth: u32) -> f64 {
        1.0 - (0..depth).map(|n| {
            let (c, g) = self.generation(n);
            c * g
        }).sum::<f64>()
    }

    /// Intervals of `[0, 1]` kept after `depth` generations.
    pub fn intervals(&self, depth: u32) -> Result<Vec<(f64, f64)>> {
        self.validate(depth)?;
        let mut cur = vec![(0.0, 1.0)];
        for n in 0..depth {
            let g = self.gap_length(n);
            let mut next = Vec::with_capacity(2 * cur.len());
            for &(x, y) in &cur {
                match *self {
                    CantorKind::SelfSimilar { ratio } => {
                        let keep = ratio * (y - x);
                        next.push((x, x + keep));
                        next.push((y - keep, y));
                    }
                    _ => {
                        let m = 0.5 * (x + y);
                        next.push((x, m - 0.5 * g));
                        next.push((m + 0.5 * g, y));
                    }
                }
            }
            cur = next;
        }
        Ok(cur)
    }

    /// The depth-`depth` set on the whole circle.
    pub fn build(&self, depth: u32) -> Result<CircleSet> {
        let arcs = self
            .intervals(depth)?
            .into_iter()
            .map(|(x, y)| Arc::from_endpoints(x, y))
            .collect::<Result<Vec<_>>>()?;
        Ok(normalize(&arcs))
    }

    /// The depth-`depth` set scaled affinely into `host`.
    pub fn build_in(&self, depth: u32, host: &Arc) -> Result<CircleSet> {
        let (s, l) = (host.start(), host.length());
        let arcs = self
            .intervals(depth)?
            .into_iter()
            .map(|(x, y)| Arc::from_endpoints(s + l * x, s + l * y))
            .collect::<Result<Vec<_>>>()?;
        Ok(normalize(&arcs))
    }
}

impl CantorSpec {
    pub fn build(&self) -> Result<CircleSet> {
        self.kind.build(self.depth)
    }
}

/// The depth-`depth` Cantor set of the given kind.
pub fn cantor_generator(kind: CantorKind, depth: u32) -> Result<CircleSet> {
    kind.build(depth)
}

impl fmt::Display for CantorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CantorKind::Fat { g0, ratio } => write!(f, "fat:{g0},{ratio}"),
            CantorKind::FatPower { g0, exponent } => write!(f, "fatpower:{g0},{exponent}"),
            CantorKind::SelfSimilar { ratio } => write!(f, "selfsimilar:{ratio}"),
        }
    }
}

impl FromStr for CantorKind {
    type Err = Error;

    /// Parses `fat:g0,ratio`, `fatpower:g0,exponent` or `selfsimilar:ratio`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown Cantor descriptor {s:?}"));
        let (name, args) = s.trim().split_once(':').ok_or_else(bad)?;
        let nums = args
            .split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        let kind = match (name.trim(), nums.as_slice()) {
            ("fat", [g0, ratio]) => CantorKind::Fat { g0: *g0, ratio: *ratio },
            ("fatpower", [g0, p]) => CantorKind::FatPower { g0: *g0, exponent: *p },
            ("selfsimilar", [r]) => CantorKind::SelfSimilar { ratio: *r },
            _ => return Err(bad()),
        };
        kind.check_params()?;
        Ok(kind)
    }
}
