//! Dyadic Whitney decomposition of the gaps of a closed set.
//!
//! A gap of length `L` is split into its middle half, then on each side into
//! arcs of length `L·2^{-k-2}` for `k = 1..depth` marching toward the endpoint.
//! A side piece lies at distance exactly its own length from the set; the
//! central piece lies at distance `L/4`, half its length. Two residual end
//! intervals of length `L·2^{-depth-2}` per gap are left out.

use super::{wrap_turn, Arc, CircleSet};
use crate::error::{param, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhitneyPiece {
    pub arc: Arc,
    pub ell: f64,
    pub center: f64,
    pub gap_index: usize,
    /// 0 for the central piece, `-k` on the left side, `+k` on the right.
    pub generation: i32,
}

impl WhitneyPiece {
    pub fn is_central(&self) -> bool {
        self.generation == 0
    }

    /// Distance from the piece to the set under the dyadic scheme.
    pub fn distance_to_set(&self) -> f64 {
        if self.is_central() {
            0.5 * self.ell
        } else {
            self.ell
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WhitneyDecomposition {
    pub pieces: Vec<WhitneyPiece>,
    pub truncation_depth: u32,
    /// Lengths of the gaps, indexed by `gap_index`.
    pub gap_lengths: Vec<f64>,
}

impl WhitneyDecomposition {
    /// Total length of the discarded end intervals.
    pub fn residual_measure(&self) -> f64 {
        let f = 2f64.powi(-(self.truncation_depth as i32) - 2);
        self.gap_lengths.iter().map(|l| 2.0 * l * f).sum()
    }
}

pub fn whitney(k: &CircleSet, depth: u32) -> Result<WhitneyDecomposition> {
    if depth < 1 {
        return param("Whitney depth must be at least 1");
    }
    if k.is_empty() {
        return param("Whitney decomposition needs a nonempty set");
    }
    let gaps = k.gaps();
    if gaps.is_empty() {
        return param("Whitney decomposition needs a nonempty complement");
    }
    let mut pieces = Vec::with_capacity(gaps.len() * (2 * depth as usize + 1));
    for (gi, gap) in gaps.iter().enumerate() {
        let a = gap.start();
        let b = gap.end();
        let l = gap.length();
        let mk = |lo: f64, len: f64, generation: i32| {
            let arc = Arc::new(lo, len).expect("positive piece length");
            WhitneyPiece { arc, ell: len, center: wrap_turn(lo + 0.5 * len), gap_index: gi, generation }
        };
        pieces.push(mk(a + 0.25 * l, 0.5 * l, 0));
        for kk in 1..=depth as i32 {
            let len = l * 2f64.powi(-kk - 2);
            pieces.push(mk(a + len, len, -kk));
            pieces.push(mk(b - 2.0 * len, len, kk));
        }
    }
    Ok(WhitneyDecomposition {
        pieces,
        truncation_depth: depth,
        gap_lengths: gaps.iter().map(Arc::length).collect(),
    })
}
