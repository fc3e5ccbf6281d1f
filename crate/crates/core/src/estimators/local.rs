//! Localized limits: averaged rescaled curvature mass per cylinder cell.

use serde::{Deserialize, Serialize};

use super::curve::CurvatureCurve;
use super::epsgrid::log_integral;
use crate::error::{invalid, Error, Result};
use crate::ifs::Word;

/// One cell of a localization report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalCell {
    pub cell_id: usize,
    /// `None` for the complement of the cylinder cells.
    pub word: Option<Word>,
    /// Averaged rescaled mass `⟨ε^{D-k} C_k(F_ε, cell)⟩`.
    pub mass: f64,
    pub mass_fraction: f64,
    /// `μ_F(cell)`: `r_ω^D` for cylinders, `0` for the complement.
    pub reference: f64,
    pub abs_error: f64,
    /// Fraction under the literal average over `[δ, 1]`.
    pub literal_fraction: f64,
}

/// Per-cell averaged masses compared against `C_k^f · μ_F`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalLimitReport {
    pub k: usize,
    pub level: usize,
    pub delta: f64,
    /// Averaging window `[lo, hi]` actually used.
    pub window: (f64, f64),
    pub cells: Vec<LocalCell>,
    /// Sum of the cell masses (the averaged total rescaled curvature).
    pub total: f64,
    pub max_abs_error: f64,
    pub complement_fraction: f64,
    /// Complement fraction for each whole-period (or decade) window, coarse to fine.
    pub complement_trend: Vec<(f64, f64)>,
    pub warnings: Vec<String>,
}

/// Localized weak-limit check on the cell family recorded in `curve`.
pub fn local_limit(curve: &CurvatureCurve, k: usize, delta: f64) -> Result<LocalLimitReport> {
    let Some(series) = &curve.cells else {
        return invalid("the curve was built without localization cells");
    };
    if k > curve.ambient_dim {
        return invalid(format!("C_{k} is not defined in dimension {}", curve.ambient_dim));
    }
    let g = &curve.grid;
    if delta < g.lower_edge() * (1.0 - 1e-9) || delta >= g.eps_max {
        return Err(Error::OutOfRange {
            what: "delta",
            value: delta,
            range: format!("[{}, {})", g.lower_edge(), g.eps_max),
        });
    }
    let s = curve.dimension - k as f64;
    let ncell = series.words.len();
    let eps = curve.eps();
    // rescaled cell values, cell-major
    let resc: Vec<Vec<f64>> = (0..ncell)
        .map(|c| {
            eps.iter()
                .zip(&series.values)
                .map(|(e, row)| e.powf(s) * row[k][c])
                .collect()
        })
        .collect();

    let du = g.du();
    let per = match (curve.lattice.generator(), g.per_period) {
        (Some(_), Some(n)) => n,
        _ => (std::f64::consts::LN_10 / du).round().max(1.0) as usize,
    };
    // lowest whole window of `per` cells above δ
    let j = (((g.eps_max / delta).ln() / du + 1e-9).floor() as usize).min(eps.len());
    if j < per {
        return invalid("delta leaves less than one averaging window on the curve");
    }
    let window_mean = |end: usize, c: usize| -> f64 { resc[c][end - per..end].iter().sum::<f64>() / per as f64 };
    let masses: Vec<f64> = (0..ncell).map(|c| window_mean(j, c)).collect();
    let total: f64 = masses.iter().sum();
    let window = (g.eps_max * g.q.powf(j as f64), g.eps_max * g.q.powf((j - per) as f64));

    let hi = g.eps_max.min(1.0);
    let literal: Vec<f64> = (0..ncell).map(|c| log_integral(g, &resc[c], delta, hi)).collect();
    let literal_total: f64 = literal.iter().sum();

    let mut warnings = Vec::new();
    if total.abs() < 1e-12 {
        warnings.push("total averaged mass vanishes; fractions are undefined".to_string());
    }
    if let super::curve::EngineInfo::Grid { h, .. } = curve.engine {
        let smallest = series
            .words
            .iter()
            .flatten()
            .map(|w| w.ratio(&curve.ratios))
            .fold(f64::INFINITY, f64::min);
        // cells are images of the open set, whose size is comparable to diam F
        if smallest * curve.reference_radius / 1.5 < 8.0 * h {
            warnings.push(format!("level-{} cells are below 8h = {}", series.level, 8.0 * h));
        }
    }

    let d = curve.dimension;
    let cells: Vec<LocalCell> = series
        .words
        .iter()
        .enumerate()
        .map(|(c, w)| {
            let reference = w.as_ref().map_or(0.0, |w| w.ratio(&curve.ratios).powf(d));
            let frac = masses[c] / total;
            LocalCell {
                cell_id: c,
                word: w.clone(),
                mass: masses[c],
                mass_fraction: frac,
                reference,
                abs_error: (frac - reference).abs(),
                literal_fraction: literal[c] / literal_total,
            }
        })
        .collect();
    let comp = ncell - 1;
    let mut trend = Vec::new();
    let mut end = per;
    while end <= j {
        let t: f64 = (0..ncell).map(|c| window_mean(end, c)).sum();
        trend.push((g.eps_max * g.q.powf(end as f64), window_mean(end, comp) / t));
        end += per;
    }
    Ok(LocalLimitReport {
        k,
        level: series.level,
        delta,
        window,
        max_abs_error: cells.iter().map(|c| c.abs_error).fold(0.0, f64::max),
        complement_fraction: cells[comp].mass_fraction,
        complement_trend: trend,
        cells,
        total,
        warnings,
    })
}
