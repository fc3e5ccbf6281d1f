//! Fractal curvature estimators: curves, averages, renewal integrals,
//! localized limits and scaling diagnostics.

mod average;
mod curve;
mod diagnostics;
mod epsgrid;
mod exact;
mod local;
mod renewal;

pub use average::{
    cesaro_average, periodic_mean, variation_bound_report, CesaroAverage, VariationBound, MIN_SAMPLES_PER_PERIOD,
};
pub use curve::{
    curvature_curve, proxy_block, rescale, CellSeries, CurvatureCurve, CurveOptions, CurveSample, Engine, EngineInfo,
    RescaledCurve,
};
pub use diagnostics::{
    condition_ii_diagnostic, omega_count, omega_scaling_diagnostic, sigma_b, ConditionIiReport, OmegaReport,
    OmegaTarget,
};
pub use epsgrid::EpsGrid;
pub use exact::{exact_parallel_set, ExactLine};
pub use local::{local_limit, LocalCell, LocalLimitReport};
pub use renewal::{
    cesaro_estimate, renewal_estimate, tail_estimate, FractalCurvatureEstimate, Method, RenewalOptions, TailFit,
};

/// Least-squares line `y ≈ slope·x + intercept`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}
