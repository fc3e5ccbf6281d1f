//! Similarity dimension, the entropy-like constant η and lattice classification.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

fn validate(ratios: &[f64]) -> Result<()> {
    if ratios.len() < 2 {
        return invalid(format!("need at least two ratios, got {}", ratios.len()));
    }
    if let Some(r) = ratios.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
        return invalid(format!("ratio {r} is not in (0,1)"));
    }
    Ok(())
}

fn moran_sum(ratios: &[f64], s: f64) -> f64 {
    ratios.iter().map(|r| r.powf(s)).sum()
}

/// Unique `D` with `Σ r_i^D = 1`.
///
/// Bisection on the strictly decreasing map `s -> Σ r_i^s`, then Newton steps.
pub fn similarity_dimension(ratios: &[f64]) -> Result<f64> {
    validate(ratios)?;
    let mut lo = 0.0;
    let mut hi = 3.0;
    while moran_sum(ratios, hi) > 1.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if moran_sum(ratios, mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * hi {
            break;
        }
    }
    let mut s = 0.5 * (lo + hi);
    for _ in 0..4 {
        let f = moran_sum(ratios, s) - 1.0;
        let df: f64 = ratios.iter().map(|r| r.powf(s) * r.ln()).sum();
        let next = s - f / df;
        if !(next > lo && next < hi) {
            break;
        }
        s = next;
    }
    Ok(s)
}

/// `η = -Σ r_i^D ln r_i`.
pub fn eta(ratios: &[f64], dimension: f64) -> Result<f64> {
    validate(ratios)?;
    Ok(-ratios.iter().map(|r| r.powf(dimension) * r.ln()).sum::<f64>())
}

/// Arithmetic structure of `{-ln r_i}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LatticeClass {
    /// All `-ln r_i` lie in `h·Z`; `h` is the generator.
    Lattice { h: f64 },
    /// No rational relation with denominator up to `cap` was found.
    NonLattice { cap: u64 },
}

impl LatticeClass {
    pub fn generator(&self) -> Option<f64> {
        match self {
            LatticeClass::Lattice { h } => Some(*h),
            LatticeClass::NonLattice { .. } => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            LatticeClass::Lattice { h } => format!("lattice h={}", describe_log(*h)),
            LatticeClass::NonLattice { cap } => {
                format!("numerically non-lattice at cap Q={cap}")
            }
        }
    }
}

fn describe_log(h: f64) -> String {
    // name small integer logarithms, e.g. "ln 3"
    for n in 2..=64u32 {
        let l = (n as f64).ln();
        if (l - h).abs() <= 1e-12 * l {
            return format!("ln {n}");
        }
    }
    format!("{h:.12}")
}

/// Best rational approximation `p/q` of `x` with `q ≤ cap` among continued-fraction
/// convergents that agrees with `x` to `tol` (relative to `max(1,|x|)`).
fn rational_match(x: f64, cap: u64, tol: f64) -> Option<(i64, u64)> {
    let scale = x.abs().max(1.0);
    let (mut p0, mut q0, mut p1, mut q1) = (1i128, 0i128, x.floor() as i128, 1i128);
    let mut frac = x - x.floor();
    loop {
        if q1 as u64 > cap {
            return None;
        }
        if (x - p1 as f64 / q1 as f64).abs() <= tol * scale {
            return Some((p1 as i64, q1 as u64));
        }
        if frac.abs() < 1e-300 {
            return None;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        frac = inv - a;
        let a = a as i128;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        if q1 > (cap as i128) * 4 + 4 {
            return None;
        }
    }
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Classifies `{-ln r_i}` as lattice (with generator) or numerically non-lattice.
pub fn lattice_class(ratios: &[f64], cap: u64) -> Result<LatticeClass> {
    validate(ratios)?;
    let base = -ratios[0].ln();
    let mut fracs = Vec::with_capacity(ratios.len());
    for r in ratios {
        let x = -r.ln() / base;
        match rational_match(x, cap, 1e-12) {
            Some((p, q)) if p > 0 => fracs.push((p as u128, q as u128)),
            _ => return Ok(LatticeClass::NonLattice { cap }),
        }
    }
    // generator = base * gcd(p_i * L / q_i) / L with L = lcm(q_i)
    let l = fracs.iter().fold(1u128, |acc, &(_, q)| acc / gcd(acc, q) * q);
    let g = fracs.iter().fold(0u128, |acc, &(p, q)| gcd(acc, p * (l / q)));
    Ok(LatticeClass::Lattice {
        h: base * g as f64 / l as f64,
    })
}
