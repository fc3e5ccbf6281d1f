//! Exact parallel sets of self-similar subsets of the line.
//!
//! With `I = [a, b]` the convex hull of `F` and `S_i I` pairwise
//! interior-disjoint, `F = I ∖ ⋃_ω S_ω G` where `G` are the gaps of `⋃ S_i I` in
//! `I`. A gap of length `g` is bridged by `F_ε` iff `g ≤ 2ε`, hence
//!
//! * `χ(F_ε) = 1 + #{g > 2ε}`,
//! * `|F_ε| = A(ε) + 2ε χ(F_ε)` with `A(ε) = |I| − Σ_{g > 2ε} g`.
//!
//! Both are step functions of `ε`, so every functional of interest is
//! piecewise of the form `a + bε` and can be integrated in closed form.

use crate::error::{invalid, Error, Result};
use crate::functionals::FunctionalVector;
use crate::geometry::{parallel_intervals, IntervalSet};
use crate::ifs::Ifs;
use serde::{Deserialize, Serialize};

/// Gap spectrum of a self-similar set on the line, complete down to `floor`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactLine {
    hull: (f64, f64),
    /// All gaps longer than `2·floor`, in decreasing order.
    gaps: Vec<f64>,
    /// `prefix[n] = Σ_{m<n} gaps[m]`.
    prefix: Vec<f64>,
    floor: f64,
}

impl ExactLine {
    /// Spectrum valid for all `ε ≥ floor`.
    pub fn new(ifs: &Ifs, floor: f64) -> Result<Self> {
        if ifs.ambient_dim() != 1 {
            return invalid("the exact engine needs a system on the line");
        }
        if !(floor > 0.0) {
            return Err(Error::OutOfRange {
                what: "eps floor",
                value: floor,
                range: "(0, inf)".into(),
            });
        }
        let hull = ifs.hull();
        let (a, b) = (
            hull[0][0].min(hull[hull.len() - 1][0]),
            hull[0][0].max(hull[hull.len() - 1][0]),
        );
        let mut pieces: Vec<(f64, f64)> = ifs
            .maps()
            .iter()
            .map(|m| {
                let (x, y) = (m.apply([a, 0.0])[0], m.apply([b, 0.0])[0]);
                (x.min(y), x.max(y))
            })
            .collect();
        pieces.sort_by(|p, q| p.0.total_cmp(&q.0));
        let tol = 1e-12 * (b - a);
        let mut base = Vec::new();
        for w in pieces.windows(2) {
            let g = w[1].0 - w[0].1;
            if g < -tol {
                return invalid("first-level images of the hull overlap; the gap spectrum is not defined");
            }
            if g > tol {
                base.push(g);
            }
        }
        let gmax = base.iter().copied().fold(0.0, f64::max);
        let mut gaps = Vec::new();
        if gmax > 0.0 {
            // every word with r_ω·g_max > 2·floor contributes its scaled base gaps
            let rs = ifs.ratios();
            let mut stack = vec![1.0f64];
            let mut visited = 0u64;
            while let Some(r) = stack.pop() {
                visited += 1;
                if visited > ifs.word_budget() {
                    return Err(Error::Budget {
                        budget: ifs.word_budget(),
                        needed: visited,
                    });
                }
                for &g in &base {
                    if r * g > 2.0 * floor {
                        gaps.push(r * g);
                    }
                }
                for &ri in &rs {
                    if r * ri * gmax > 2.0 * floor {
                        stack.push(r * ri);
                    }
                }
            }
        }
        gaps.sort_by(|x, y| y.total_cmp(x));
        let mut prefix = Vec::with_capacity(gaps.len() + 1);
        prefix.push(0.0);
        let mut s = 0.0;
        for g in &gaps {
            s += g;
            prefix.push(s);
        }
        Ok(ExactLine {
            hull: (a, b),
            gaps,
            prefix,
            floor,
        })
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn hull(&self) -> (f64, f64) {
        self.hull
    }

    /// Number of gaps strictly longer than `2ε`.
    fn open_gaps(&self, eps: f64) -> usize {
        debug_assert!(
            eps >= self.floor * (1.0 - 1e-12),
            "eps {eps} below spectrum floor {}",
            self.floor
        );
        // gaps within rounding of 2ε count as bridged
        self.gaps.partition_point(|&g| g > 2.0 * eps * (1.0 + 1e-12))
    }

    /// `(a, b)` with `C_k(F_t) = a + b t` on the constancy interval containing `eps`.
    pub fn affine(&self, k: usize, eps: f64) -> (f64, f64) {
        let n = self.open_gaps(eps);
        let chi = 1.0 + n as f64;
        match k {
            0 => (chi, 0.0),
            1 => ((self.hull.1 - self.hull.0) - self.prefix[n], 2.0 * chi),
            _ => panic!("C_{k} is not defined on the line"),
        }
    }

    pub fn functionals(&self, eps: f64) -> FunctionalVector {
        let n = self.open_gaps(eps);
        let chi = 1 + n as i64;
        let length = (self.hull.1 - self.hull.0) - self.prefix[n] + 2.0 * eps * chi as f64;
        FunctionalVector {
            chi,
            half_boundary: chi as f64,
            volume: length,
        }
    }

    /// Scales `g/2` in `(lo, hi)` at which `C_k(F_ε)` jumps, increasing.
    pub fn breakpoints(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .gaps
            .iter()
            .map(|g| g / 2.0)
            .filter(|&t| t > lo && t < hi)
            .collect();
        v.reverse();
        v.dedup();
        v
    }
}

/// `F_ε` as a union of intervals: the hull images `S_ω I` with `r_ω |I| ≤ 2ε`
/// are within `ε` of `S_ω F` everywhere, so their `ε`-neighbourhood is `F_ε`.
pub fn exact_parallel_set(ifs: &Ifs, eps: f64) -> Result<IntervalSet> {
    if ifs.ambient_dim() != 1 {
        return invalid("the exact engine needs a system on the line");
    }
    if !(eps > 0.0) {
        return Err(Error::OutOfRange {
            what: "eps",
            value: eps,
            range: "(0, inf)".into(),
        });
    }
    let hull = ifs.hull();
    let (a, b) = (
        hull[0][0].min(hull[hull.len() - 1][0]),
        hull[0][0].max(hull[hull.len() - 1][0]),
    );
    let len = b - a;
    let (words, _) = ifs.descend(|r| r * len > 2.0 * eps)?;
    let mut pieces = Vec::with_capacity(words.len());
    for w in &words {
        let m = ifs.word_map(w)?;
        let (x, y) = (m.apply([a, 0.0])[0], m.apply([b, 0.0])[0]);
        pieces.push((x.min(y), x.max(y)));
    }
    Ok(parallel_intervals(&pieces, eps))
}

/// `∫_lo^hi t^{s-1} dt`.
pub(crate) fn power_integral(s: f64, lo: f64, hi: f64) -> f64 {
    if s.abs() < 1e-14 {
        (hi / lo).ln()
    } else {
        (hi.powf(s) - lo.powf(s)) / s
    }
}
