//! Exact parallel sets on the line.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Sorted, pairwise disjoint closed intervals with strict gaps.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self> {
        for &(a, b) in &intervals {
            if !(a <= b) {
                return invalid(format!("interval [{a}, {b}] is reversed or NaN"));
            }
        }
        for w in intervals.windows(2) {
            if !(w[0].1 < w[1].0) {
                return invalid("intervals are not sorted with strict gaps");
            }
        }
        Ok(Self { intervals })
    }

    /// Union of arbitrary closed intervals; touching intervals merge.
    pub fn union_of(mut intervals: Vec<(f64, f64)>) -> Self {
        intervals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(intervals.len());
        for (a, b) in intervals {
            match out.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        Self { intervals: out }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn components(&self) -> usize {
        self.intervals.len()
    }

    pub fn length(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    /// Gaps between consecutive components.
    pub fn gaps(&self) -> impl Iterator<Item = f64> + '_ {
        self.intervals.windows(2).map(|w| w[1].0 - w[0].1)
    }
}

/// `{x : dist(x, K) ≤ ε}` for `K` a finite union of closed intervals (points are degenerate intervals).
pub fn parallel_intervals(set: &[(f64, f64)], eps: f64) -> IntervalSet {
    IntervalSet::union_of(set.iter().map(|&(a, b)| (a - eps, b + eps)).collect())
}

pub fn parallel_points(centers: &[f64], eps: f64) -> IntervalSet {
    IntervalSet::union_of(centers.iter().map(|&c| (c - eps, c + eps)).collect())
}
