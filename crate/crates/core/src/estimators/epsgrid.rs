//! Geometric ε-grids.

use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};

/// `ε_j = ε_max · q^{j + offset}`, `j = 0..count`.
///
/// With `offset = ½` each sample is the logarithmic midpoint of the cell
/// `[ε_max q^{j+1}, ε_max q^j]`, and the cells tile `[ε_max q^count, ε_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsGrid {
    pub eps_max: f64,
    pub q: f64,
    pub offset: f64,
    pub count: usize,
    /// Number of cells per lattice period, when the grid is aligned to one.
    pub per_period: Option<usize>,
}

impl EpsGrid {
    /// Plain geometric grid with `samples_per_decade` points per decade, from
    /// `eps_max` down to (at least) `eps_min`.
    pub fn geometric(eps_max: f64, eps_min: f64, samples_per_decade: usize) -> Result<Self> {
        check(eps_max, eps_min, samples_per_decade)?;
        let q = 10f64.powf(-1.0 / samples_per_decade as f64);
        let steps = ((eps_max / eps_min).ln() / -q.ln() + 1e-9).floor() as usize;
        Ok(EpsGrid {
            eps_max,
            q,
            offset: 0.0,
            count: steps + 1,
            per_period: None,
        })
    }

    /// Midpoint grid whose cells tile `[≈eps_min, eps_max]` with a whole number
    /// of cells per `period` (in `ln ε`), at least `samples_per_decade` per decade.
    pub fn aligned(eps_max: f64, eps_min: f64, samples_per_decade: usize, period: f64) -> Result<Self> {
        check(eps_max, eps_min, samples_per_decade)?;
        if !(period > 0.0) {
            return invalid("lattice period must be positive");
        }
        let n = ((samples_per_decade as f64) * period / std::f64::consts::LN_10 - 1e-9)
            .ceil()
            .max(1.0) as usize;
        let q = (-period / n as f64).exp();
        let cells = ((eps_max / eps_min).ln() / -q.ln() + 1e-9).floor() as usize;
        Ok(EpsGrid {
            eps_max,
            q,
            offset: 0.5,
            count: cells.max(1),
            per_period: Some(n),
        })
    }

    /// Midpoint grid without lattice alignment.
    pub fn midpoint(eps_max: f64, eps_min: f64, samples_per_decade: usize) -> Result<Self> {
        check(eps_max, eps_min, samples_per_decade)?;
        let q = 10f64.powf(-1.0 / samples_per_decade as f64);
        let cells = ((eps_max / eps_min).ln() / -q.ln() + 1e-9).floor() as usize;
        Ok(EpsGrid {
            eps_max,
            q,
            offset: 0.5,
            count: cells.max(1),
            per_period: None,
        })
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn eps(&self, j: usize) -> f64 {
        self.eps_max * self.q.powf(j as f64 + self.offset)
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|j| self.eps(j)).collect()
    }

    pub fn smallest(&self) -> f64 {
        self.eps(self.count - 1)
    }

    /// Step in `u = ln ε`.
    pub fn du(&self) -> f64 {
        -self.q.ln()
    }

    /// Whether the samples are cell midpoints.
    pub fn is_midpoint(&self) -> bool {
        self.offset == 0.5
    }

    /// Lower edge of the cell tiling (midpoint grids).
    pub fn lower_edge(&self) -> f64 {
        self.eps_max * self.q.powf(self.count as f64)
    }
}

fn check(eps_max: f64, eps_min: f64, spd: usize) -> Result<()> {
    if !(eps_min > 0.0 && eps_max > eps_min) {
        return invalid(format!("need 0 < eps_min < eps_max, got [{eps_min}, {eps_max}]"));
    }
    if spd == 0 {
        return invalid("samples per decade must be positive");
    }
    Ok(())
}

/// Integral of `f(u)` over `u ∈ [ln lo, ln hi]` by quadrature on the samples
/// (`values[j]` at `grid.eps(j)`): midpoint cells with partial weights for
/// midpoint grids, trapezoid otherwise.
pub(crate) fn log_integral(grid: &EpsGrid, values: &[f64], lo: f64, hi: f64) -> f64 {
    let (ulo, uhi) = (lo.ln(), hi.ln());
    let du = grid.du();
    let top = grid.eps_max.ln();
    let mut acc = 0.0;
    if grid.is_midpoint() {
        for (j, v) in values.iter().enumerate() {
            let c_hi = top - du * j as f64;
            let c_lo = c_hi - du;
            let w = (c_hi.min(uhi) - c_lo.max(ulo)).max(0.0);
            acc += w * v;
        }
    } else {
        for j in 0..values.len().saturating_sub(1) {
            let a = top - du * j as f64;
            let b = a - du;
            let w = (a.min(uhi) - b.max(ulo)).max(0.0);
            if w > 0.0 {
                // linear interpolation on the clipped sub-interval
                let t0 = (a - a.min(uhi)) / du;
                let t1 = (a - b.max(ulo)) / du;
                let f0 = values[j] + t0 * (values[j + 1] - values[j]);
                let f1 = values[j] + t1 * (values[j + 1] - values[j]);
                acc += w * 0.5 * (f0 + f1);
            }
        }
    }
    acc
}
