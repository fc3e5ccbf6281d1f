//! Logarithmic (Cesàro) averages and uniform bounds of rescaled curves.

use serde::{Deserialize, Serialize};

use super::curve::CurvatureCurve;
use super::epsgrid::{log_integral, EpsGrid};
use super::exact::{power_integral, ExactLine};
use crate::error::{invalid, Error, Result};

/// Minimum samples per lattice period before averages are flagged.
pub const MIN_SAMPLES_PER_PERIOD: usize = 8;

/// `(1/|ln δ|) ∫_δ^1 ε^{D-k} C_k(F_ε) dε/ε` and its period-window refinement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CesaroAverage {
    pub k: usize,
    pub delta: f64,
    /// The average over `[δ, 1]` as defined.
    pub literal: f64,
    /// Lattice case: average over the last whole period `[δ*, δ* e^p]`, `δ* ≥ δ`.
    pub period_window: Option<(f64, f64)>,
    /// Preferred estimate: the period-window average when available.
    pub value: f64,
    pub warning: Option<String>,
}

/// Cesàro average of the rescaled `k`-th curve down to `delta`.
pub fn cesaro_average(curve: &CurvatureCurve, k: usize, delta: f64) -> Result<CesaroAverage> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::OutOfRange {
            what: "delta",
            value: delta,
            range: "(0, 1)".into(),
        });
    }
    let d = curve.dimension;
    let s = d - k as f64;
    let period = curve.lattice.generator();
    let mut warning = None;

    let (literal, window) = if let Some(ex) = &curve.exact {
        if delta < ex.floor() * (1.0 - 1e-9) {
            return Err(below_curve(delta, ex.floor()));
        }
        let literal = exact_log_integral(ex, k, s, delta, 1.0) / delta.ln().abs();
        let window = period.map(|p| {
            let n = ((1.0 / delta).ln() / p + 1e-9).floor();
            let lo = (-n * p).exp().max(delta);
            (lo, exact_log_integral(ex, k, s, lo, lo * p.exp()) / p)
        });
        (literal, window)
    } else {
        let g = &curve.grid;
        if delta < g.lower_edge() * (1.0 - 1e-9) {
            return Err(below_curve(delta, g.lower_edge()));
        }
        if g.eps_max < 1.0 - 1e-12 {
            return Err(Error::OutOfRange {
                what: "eps_max",
                value: g.eps_max,
                range: "[1, inf) for averages over [delta, 1]".into(),
            });
        }
        let vals = curve.rescaled_values(k);
        let literal = log_integral(g, &vals, delta, 1.0) / delta.ln().abs();
        let window = match (period, g.per_period) {
            (Some(_), Some(n)) => {
                if n < MIN_SAMPLES_PER_PERIOD {
                    warning = Some(format!(
                        "under-resolved: {n} samples per lattice period (< {MIN_SAMPLES_PER_PERIOD})"
                    ));
                }
                last_whole_period(g, &vals, delta, n)
            }
            (Some(p), None) => {
                let lo = delta;
                Some((lo, log_integral(g, &vals, lo, lo * p.exp()) / p))
            }
            _ => None,
        };
        (literal, window)
    };
    Ok(CesaroAverage {
        k,
        delta,
        literal,
        period_window: window,
        value: window.map_or(literal, |w| w.1),
        warning,
    })
}

fn below_curve(delta: f64, floor: f64) -> Error {
    Error::OutOfRange {
        what: "delta",
        value: delta,
        range: format!("[{floor}, 1) covered by the curve"),
    }
}

/// Mean over the lowest run of `n` whole cells lying above `delta`.
fn last_whole_period(g: &EpsGrid, vals: &[f64], delta: f64, n: usize) -> Option<(f64, f64)> {
    let du = g.du();
    // lowest cell j whose lower edge eps_max q^{j+1} is ≥ δ
    let j = ((g.eps_max / delta).ln() / du + 1e-9).floor() as isize - 1;
    let j = j.min(vals.len() as isize - 1);
    if j + 1 < n as isize {
        return None;
    }
    let j = j as usize;
    let window = &vals[j + 1 - n..=j];
    let lo = g.eps_max * g.q.powf((j + 1) as f64);
    Some((lo, window.iter().sum::<f64>() / n as f64))
}

/// Mean of midpoint samples that cover whole lattice periods.
pub fn periodic_mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// `∫_lo^hi ε^{s-1} C_k(F_ε) dε` in closed form on an exact curve.
pub(crate) fn exact_log_integral(ex: &ExactLine, k: usize, s: f64, lo: f64, hi: f64) -> f64 {
    let mut pts = vec![lo];
    pts.extend(ex.breakpoints(lo, hi));
    pts.push(hi);
    let mut acc = 0.0;
    for w in pts.windows(2) {
        let (a, b) = ex.affine(k, (w[0] * w[1]).sqrt());
        acc += a * power_integral(s, w[0], w[1]) + b * power_integral(s + 1.0, w[0], w[1]);
    }
    acc
}

/// `sup ε^{D-k} C_k^var(F_ε)` over the sampled scales `ε ≤ diam F / 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariationBound {
    pub k: usize,
    pub bound: f64,
    pub argmax_eps: f64,
    /// Slope of `ln(window maximum)` against `ln(1/ε)`; windows are lattice
    /// periods or decades.
    pub slope: f64,
    /// Whether the variation is a proxy (Euler measure in the plane).
    pub proxy: bool,
    pub exact: bool,
}

/// Uniform bound of the rescaled total variation.
pub fn variation_bound_report(curve: &CurvatureCurve, k: usize) -> Result<VariationBound> {
    let d = curve.dimension;
    let s = d - k as f64;
    // the bound concerns small scales; above diam F / 2 the set is ball-like
    let cap = curve.diam / 2.0;
    let keep = curve.samples.iter().take_while(|s| s.eps > cap * (1.0 + 1e-12)).count();
    let eps = curve.eps()[keep..].to_vec();
    let var = curve.variation(k)[keep..].to_vec();
    if eps.is_empty() {
        return invalid("the curve has no samples below diam F / 2");
    }
    let resc: Vec<f64> = eps.iter().zip(&var).map(|(e, v)| e.powf(s) * v.abs()).collect();

    let (bound, argmax, exact) = match &curve.exact {
        Some(ex) => {
            let (b, a) = exact_sup(
                ex,
                k,
                s,
                curve.grid.lower_edge().max(ex.floor()),
                cap.min(curve.grid.eps_max),
            );
            (b, a, true)
        }
        None => {
            let (i, b) =
                resc.iter().copied().enumerate().fold(
                    (0, f64::NEG_INFINITY),
                    |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
                );
            (b, eps[i], false)
        }
    };

    // window maxima
    let per = match (curve.lattice.generator(), curve.grid.per_period) {
        (Some(_), Some(n)) => n,
        _ => (std::f64::consts::LN_10 / curve.grid.du()).round().max(1.0) as usize,
    };
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for chunk in resc.chunks(per).zip(eps.chunks(per)) {
        let (vals, es) = chunk;
        if vals.len() < per {
            break;
        }
        let m = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if m > 0.0 {
            let centre = (es[0] * es[es.len() - 1]).sqrt();
            xs.push((1.0 / centre).ln());
            ys.push(m.ln());
        }
    }
    let slope = if xs.len() >= 2 {
        super::linear_fit(&xs, &ys).0
    } else {
        0.0
    };
    Ok(VariationBound {
        k,
        bound,
        argmax_eps: argmax,
        slope,
        proxy: k == 0 && curve.ambient_dim == 2,
        exact,
    })
}

/// Supremum of `ε^s (a + bε)` over `[lo, hi]` on each constancy interval,
/// including the left limits at breakpoints.
fn exact_sup(ex: &ExactLine, k: usize, s: f64, lo: f64, hi: f64) -> (f64, f64) {
    let mut pts = vec![lo];
    pts.extend(ex.breakpoints(lo, hi));
    pts.push(hi);
    let mut best = (f64::NEG_INFINITY, lo);
    for w in pts.windows(2) {
        let (a, b) = ex.affine(k, (w[0] * w[1]).sqrt());
        let f = |e: f64| e.powf(s) * (a + b * e);
        let mut cands = vec![w[0], w[1]];
        if b != 0.0 && s + 1.0 != 0.0 {
            let c = -s * a / (b * (s + 1.0));
            if c > w[0] && c < w[1] {
                cands.push(c);
            }
        }
        for c in cands {
            let v = f(c).abs();
            if v > best.0 {
                best = (v, c);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::{curvature_curve, CurveOptions, Engine};
    use crate::ifs::catalog::cantor;

    fn cantor_curve(eps_min: f64) -> CurvatureCurve {
        let opts = CurveOptions {
            eps_max: 1.5,
            eps_min,
            samples_per_decade: 64,
            engine: Engine::Exact1d,
            localize_level: None,
        };
        curvature_curve(&cantor(), &opts).unwrap()
    }

    #[test]
    fn constant_and_periodic_means() {
        let p: f64 = 0.9;
        let g = EpsGrid::aligned(1.0, (-6.0 * p).exp(), 20, p).unwrap();
        let c: Vec<f64> = vec![3.5; g.len()];
        for delta in [0.5, 0.1, (-6.0 * p).exp()] {
            assert!((log_integral(&g, &c, delta, 1.0) / delta.ln().abs() - 3.5).abs() < 1e-12);
        }
        let two_pi = 2.0 * std::f64::consts::PI;
        let v: Vec<f64> = g.values().iter().map(|e| 2.0 + (two_pi * e.ln() / p).sin()).collect();
        let delta = (-6.0 * p).exp();
        assert!((log_integral(&g, &v, delta, 1.0) / delta.ln().abs() - 2.0).abs() < 1e-10);
        assert!((periodic_mean(&v[..g.per_period.unwrap()]) - 2.0).abs() < 1e-10);
    }

    #[test]
    fn cantor_minkowski_content_average() {
        let curve = cantor_curve(1e-4);
        let d = curve.dimension;
        let exact = 2f64.powf(-d) / (d * (1.0 - d) * 3f64.ln());
        let c = cesaro_average(&curve, 1, 3f64.powi(-8)).unwrap();
        assert!((c.value - exact).abs() < 0.005 * exact, "{}", c.value);
        assert!((c.value - exact).abs() < 1e-9 * exact, "{}", c.value);
        // the literal mean carries the O(1/|ln δ|) transient
        assert!((c.literal - exact).abs() > 1e-3);
        assert!(c.warning.is_none());
    }

    #[test]
    fn cantor_variation_bound() {
        let curve = cantor_curve(1e-4);
        let r = variation_bound_report(&curve, 0).unwrap();
        let m = 2f64.powf(-curve.dimension);
        assert!((r.bound - m).abs() < 1e-9, "{}", r.bound);
        assert!(r.slope.abs() < 0.02);
        let r1 = variation_bound_report(&curve, 1).unwrap();
        let small = curve
            .eps()
            .iter()
            .zip(curve.rescaled_values(1))
            .filter(|(e, _)| **e <= 0.5)
            .map(|(_, v)| v)
            .fold(0.0, f64::max);
        assert!(r1.bound >= small - 1e-12);
    }
}
