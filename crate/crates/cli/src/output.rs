//! Table and image emission.

use std::io::Write;
use std::path::Path;

use fraccurv_core::estimators::{cesaro_average, CurvatureCurve, FractalCurvatureEstimate, LocalLimitReport};

pub const CURVE_HEADER: &str = "eps,k,total,rescaled,cesaro,variation_proxy";
pub const ESTIMATE_HEADER: &str = "k,method,value,scale,reference_radius,tail_bound,flags";
pub const LOCALIZE_HEADER: &str = "cell_id,word,mass_fraction,reference,abs_error";

/// Shortest form with 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x:.16e}")
}

/// One row of the curve table.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub eps: f64,
    pub k: usize,
    pub total: f64,
    pub rescaled: f64,
    /// Cesàro average down to `eps` (absent above `ε = 1`).
    pub cesaro: Option<f64>,
    pub variation_proxy: f64,
}

pub fn curve_rows(curve: &CurvatureCurve) -> Vec<CurveRow> {
    let mut rows = Vec::new();
    for k in 0..=curve.ambient_dim {
        let total = curve.values(k);
        let resc = curve.rescaled_values(k);
        let var = curve.variation(k);
        for (j, s) in curve.samples.iter().enumerate() {
            let cesaro = if s.eps < 1.0 {
                cesaro_average(curve, k, s.eps).ok().map(|c| c.literal)
            } else {
                None
            };
            rows.push(CurveRow {
                eps: s.eps,
                k,
                total: total[j],
                rescaled: resc[j],
                cesaro,
                variation_proxy: var[j],
            });
        }
    }
    sort_rows(&mut rows);
    rows
}

/// Descending `eps`, then ascending `k`.
pub fn sort_rows(rows: &mut [CurveRow]) {
    rows.sort_by(|a, b| b.eps.total_cmp(&a.eps).then(a.k.cmp(&b.k)));
}

pub fn curve_csv(rows: &[CurveRow]) -> String {
    let mut out = String::from(CURVE_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_float(r.eps),
            r.k,
            fmt_float(r.total),
            fmt_float(r.rescaled),
            r.cesaro.map(fmt_float).unwrap_or_default(),
            fmt_float(r.variation_proxy)
        ));
    }
    out
}

pub fn estimates_csv(estimates: &[FractalCurvatureEstimate]) -> String {
    let mut out = String::from(ESTIMATE_HEADER);
    out.push('\n');
    for e in estimates {
        let bound = e.tail.map(|t| fmt_float(t.bound)).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            e.k,
            e.method.name(),
            fmt_float(e.value),
            fmt_float(e.scale),
            fmt_float(e.reference_radius),
            bound,
            e.flags.join(";")
        ));
    }
    out
}

pub fn localize_csv(report: &LocalLimitReport) -> String {
    let mut out = String::from(LOCALIZE_HEADER);
    out.push('\n');
    for c in &report.cells {
        let word = c
            .word
            .as_ref()
            .map_or_else(|| "complement".to_string(), |w| w.to_string());
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            c.cell_id,
            word,
            fmt_float(c.mass_fraction),
            fmt_float(c.reference),
            fmt_float(c.abs_error)
        ));
    }
    out
}

/// Writes `bytes` to `path`, or to standard output when no path is given.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()
        }
    }
}
