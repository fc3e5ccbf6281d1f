//! Fractal curvatures from the renewal integral
//! `C_k^f = (1/η) ∫_0^R r^{D-k-1} R_k(r) dr`, with
//! `R_k(ε) = C_k(F_ε) − Σ_i 1_{(0, R r_i]}(ε) r_i^k C_k(F_{ε/r_i})`.

use serde::{Deserialize, Serialize};

use super::average::cesaro_average;
use super::curve::CurvatureCurve;
use super::epsgrid::log_integral;
use super::exact::power_integral;
use crate::error::{Error, Result};

/// How a fractal curvature value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Cesaro,
    Renewal,
    TailEsslim,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Cesaro => "cesaro",
            Method::Renewal => "renewal",
            Method::TailEsslim => "tail-esslim",
        }
    }
}

/// Power-law bound `|R_k(r)| ≤ a r^{k-D+γ}` fitted on the smallest decade.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub a: f64,
    pub gamma: f64,
    /// `(1/η) ∫_0^{ε_min} r^{D-k-1} a r^{k-D+γ} dr`; reported, never added.
    pub bound: f64,
    pub controlled: bool,
}

/// An estimate of `C_k^f(F)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractalCurvatureEstimate {
    pub k: usize,
    pub value: f64,
    pub method: Method,
    /// Truncation scale (renewal) or averaging scale δ (Cesàro).
    pub scale: f64,
    pub reference_radius: f64,
    pub tail: Option<TailFit>,
    pub flags: Vec<String>,
}

/// Options of the renewal integral.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RenewalOptions {
    /// Use `1_{(0, r_i]}` instead of the scale-consistent `1_{(0, R r_i]}`.
    pub literal_indicator: bool,
}

impl CurvatureCurve {
    fn cutoff(&self, i: usize, literal: bool) -> f64 {
        if literal {
            self.ratios[i]
        } else {
            self.reference_radius * self.ratios[i]
        }
    }

    /// `R_k(ε)`.
    pub fn renewal_integrand(&self, k: usize, eps: f64, opts: RenewalOptions) -> Result<f64> {
        let mut v = self.value_at(k, eps)?;
        for (i, &r) in self.ratios.iter().enumerate() {
            if eps <= self.cutoff(i, opts.literal_indicator) {
                v -= r.powi(k as i32) * self.value_at(k, eps / r)?;
            }
        }
        Ok(v)
    }
}

/// `(1/η) ∫_{ε_min}^R r^{D-k-1} R_k(r) dr` with a reported tail bound.
pub fn renewal_estimate(curve: &CurvatureCurve, k: usize, opts: RenewalOptions) -> Result<FractalCurvatureEstimate> {
    let d = curve.dimension;
    let s = d - k as f64;
    let big_r = curve.reference_radius;
    let lo = curve
        .grid
        .lower_edge()
        .max(curve.exact.as_ref().map_or(0.0, |e| e.floor()));
    let integral = match &curve.exact {
        Some(ex) => {
            let mut pts = vec![lo];
            pts.extend(ex.breakpoints(lo, big_r));
            for (i, &r) in curve.ratios.iter().enumerate() {
                pts.extend(ex.breakpoints(lo / r, big_r / r).into_iter().map(|t| t * r));
                pts.push(curve.cutoff(i, opts.literal_indicator));
            }
            pts.push(big_r);
            pts.retain(|&t| t >= lo && t <= big_r);
            pts.sort_by(f64::total_cmp);
            pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * b.abs());
            let mut acc = 0.0;
            for w in pts.windows(2) {
                let mid = (w[0] * w[1]).sqrt();
                let (mut a, mut b) = ex.affine(k, mid);
                for (i, &r) in curve.ratios.iter().enumerate() {
                    if mid <= curve.cutoff(i, opts.literal_indicator) {
                        let (ai, bi) = ex.affine(k, mid / r);
                        // r^k C_k(F_{ε/r}) = r^k a_i + r^{k-1} b_i ε
                        a -= r.powi(k as i32) * ai;
                        b -= r.powi(k as i32 - 1) * bi;
                    }
                }
                acc += a * power_integral(s, w[0], w[1]) + b * power_integral(s + 1.0, w[0], w[1]);
            }
            acc
        }
        None => {
            if curve.grid.eps_max < big_r * (1.0 - 1e-9) {
                return Err(Error::OutOfRange {
                    what: "eps_max",
                    value: curve.grid.eps_max,
                    range: format!("[R = {big_r}, inf) for the renewal integral"),
                });
            }
            let vals = curve
                .eps()
                .iter()
                .map(|&e| Ok(e.powf(s) * curve.renewal_integrand(k, e, opts)?))
                .collect::<Result<Vec<f64>>>()?;
            log_integral(&curve.grid, &vals, lo, big_r)
        }
    };
    let value = integral / curve.eta;
    let tail = tail_fit(curve, k, lo, opts)?;
    let mut flags = Vec::new();
    if !tail.controlled {
        flags.push("tail not controlled".to_string());
    }
    if value.abs() < 1e-9 {
        flags.push("near zero: exponent D-k may not be appropriate".to_string());
    }
    if opts.literal_indicator {
        flags.push("literal indicator".to_string());
    }
    Ok(FractalCurvatureEstimate {
        k,
        value,
        method: Method::Renewal,
        scale: lo,
        reference_radius: big_r,
        tail: Some(tail),
        flags,
    })
}

fn tail_fit(curve: &CurvatureCurve, k: usize, lo: f64, opts: RenewalOptions) -> Result<TailFit> {
    let d = curve.dimension;
    let base = k as f64 - d;
    let pts: Vec<f64> = if curve.is_exact() {
        (0..=40).map(|i| lo * 10f64.powf(i as f64 / 40.0)).collect()
    } else {
        curve.eps().into_iter().filter(|&e| e <= 10.0 * lo).collect()
    };
    let mut samples = Vec::new();
    let mut scale = 0.0f64;
    for &e in &pts {
        if e > curve.reference_radius {
            continue;
        }
        let v = curve.renewal_integrand(k, e, opts)?;
        scale = scale.max(curve.value_at(k, e)?.abs());
        samples.push((e, v));
    }
    let nonzero: Vec<(f64, f64)> = samples
        .iter()
        .copied()
        .filter(|(_, v)| v.abs() > 1e-12 * scale.max(1e-300))
        .collect();
    if nonzero.len() < 3 {
        return Ok(TailFit {
            a: 0.0,
            gamma: f64::INFINITY,
            bound: 0.0,
            controlled: true,
        });
    }
    let xs: Vec<f64> = nonzero.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = nonzero.iter().map(|p| p.1.abs().ln()).collect();
    let (slope, _) = super::linear_fit(&xs, &ys);
    let gamma = slope - base;
    let a = nonzero
        .iter()
        .map(|&(e, v)| v.abs() * e.powf(-(base + gamma)))
        .fold(0.0, f64::max);
    if gamma <= 0.0 {
        return Ok(TailFit {
            a,
            gamma,
            bound: f64::INFINITY,
            controlled: false,
        });
    }
    let bound = a * lo.powf(gamma) / (gamma * curve.eta);
    Ok(TailFit {
        a,
        gamma,
        bound,
        controlled: true,
    })
}

/// Cesàro average down to `delta`, reported in estimate form.
pub fn cesaro_estimate(curve: &CurvatureCurve, k: usize, delta: f64) -> Result<FractalCurvatureEstimate> {
    let avg = cesaro_average(curve, k, delta)?;
    let scale = avg.period_window.map_or(avg.delta, |(lo, _)| lo);
    Ok(FractalCurvatureEstimate {
        k,
        value: avg.value,
        method: Method::Cesaro,
        scale,
        reference_radius: curve.reference_radius,
        tail: None,
        flags: avg.warning.into_iter().collect(),
    })
}

/// Mean of the rescaled curve over its smallest decade (essential-limit estimate
/// for non-lattice systems).
pub fn tail_estimate(curve: &CurvatureCurve, k: usize) -> FractalCurvatureEstimate {
    let lo = curve.grid.lower_edge();
    let vals = curve.rescaled_values(k);
    let hi = (10.0 * lo).min(curve.grid.eps_max);
    let value = log_integral(&curve.grid, &vals, lo, hi) / (hi / lo).ln();
    let mut flags = Vec::new();
    if curve.lattice.generator().is_some() {
        flags.push("lattice system: the plain limit does not exist".to_string());
    }
    FractalCurvatureEstimate {
        k,
        value,
        method: Method::TailEsslim,
        scale: lo,
        reference_radius: curve.reference_radius,
        tail: None,
        flags,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::{curvature_curve, CurveOptions, Engine};
    use crate::ifs::catalog::cantor;

    fn curve(r: f64) -> CurvatureCurve {
        let c = cantor().with_reference_radius(r).unwrap();
        let opts = CurveOptions {
            eps_max: r,
            eps_min: 1e-4,
            samples_per_decade: 32,
            engine: Engine::Exact1d,
            localize_level: None,
        };
        curvature_curve(&c, &opts).unwrap()
    }

    #[test]
    fn cantor_closed_forms() {
        let c = curve(1.5);
        let d = c.dimension;
        let l3 = 3f64.ln();
        let k0 = renewal_estimate(&c, 0, RenewalOptions::default()).unwrap();
        assert!((k0.value - 2f64.powf(-d - 1.0) / (d * l3)).abs() < 1e-9, "{}", k0.value);
        let k1 = renewal_estimate(&c, 1, RenewalOptions::default()).unwrap();
        assert!(
            (k1.value - 2f64.powf(-d) / (d * (1.0 - d) * l3)).abs() < 1e-9,
            "{}",
            k1.value
        );
        assert!(k1.tail.unwrap().controlled);
        assert_eq!(k1.tail.unwrap().bound, 0.0);
    }

    #[test]
    fn integrand_vanishes_below_first_gap() {
        let c = curve(1.5);
        for e in [1e-3, 0.01, 0.1, 0.16] {
            assert!(c.renewal_integrand(1, e, RenewalOptions::default()).unwrap().abs() < 1e-12);
        }
        assert!((c.renewal_integrand(0, 0.3, RenewalOptions::default()).unwrap() + 1.0).abs() < 1e-12);
        assert!((c.renewal_integrand(0, 1.0, RenewalOptions::default()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reference_radius_cancels() {
        for k in 0..=1 {
            let a = renewal_estimate(&curve(1.5), k, RenewalOptions::default())
                .unwrap()
                .value;
            let b = renewal_estimate(&curve(2.0), k, RenewalOptions::default())
                .unwrap()
                .value;
            assert!((a - b).abs() < 1e-9, "k={k}: {a} vs {b}");
        }
        // the literal indicator is not R-invariant
        let lit = RenewalOptions {
            literal_indicator: true,
        };
        let a = renewal_estimate(&curve(1.5), 1, lit).unwrap().value;
        let b = renewal_estimate(&curve(2.0), 1, lit).unwrap().value;
        assert!((a - b).abs() > 1e-3);
    }
}
