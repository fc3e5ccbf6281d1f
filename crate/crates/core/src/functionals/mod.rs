//! Curvature functionals of discrete parallel sets.
//!
//! `C_0` is the Euler characteristic, `C_{d-1}` half the boundary measure and
//! `C_d` the volume. Global values come with localized versions on cell
//! partitions; every localized quantity is accumulated in exact integer units so
//! that cell values add up to the global value without rounding.

mod euler;
mod interval;
mod partition;
mod sweep;

pub use euler::{complex_counts, euler_characteristic, euler_cross_check};
pub use interval::{interval_functionals, interval_localized};
pub use partition::{AxisPartition, CellPartition, RegionPartition};
pub use sweep::{
    localized_functionals, minkowski_functionals, pixel_functionals, EulerVertex, GridEvaluation, GridEvaluator,
};

use serde::{Deserialize, Serialize};

/// `(C_0, C_{d-1}, C_d)` of one parallel set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalVector {
    /// Euler characteristic.
    pub chi: i64,
    /// Half the boundary length in the plane; equals `chi` on the line.
    pub half_boundary: f64,
    /// Area in the plane, length on the line.
    pub volume: f64,
}

impl FunctionalVector {
    /// `C_k` in ambient dimension `dim` (`k ≤ dim ≤ 2`).
    pub fn get(&self, k: usize, dim: usize) -> f64 {
        match (dim, k) {
            (_, 0) => self.chi as f64,
            (1, 1) | (2, 2) => self.volume,
            (2, 1) => self.half_boundary,
            _ => panic!("C_{k} is not defined in dimension {dim}"),
        }
    }
}

/// A signed measure on the cells of a partition, stored as integer multiples of
/// a fixed unit.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedCellMeasure {
    unit: f64,
    raw: Vec<i64>,
}

impl SignedCellMeasure {
    pub(crate) fn new(unit: f64, raw: Vec<i64>) -> Self {
        SignedCellMeasure { unit, raw }
    }

    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }

    pub fn value(&self, cell: usize) -> f64 {
        self.raw[cell] as f64 * self.unit
    }

    pub fn positive_part(&self, cell: usize) -> f64 {
        self.raw[cell].max(0) as f64 * self.unit
    }

    pub fn negative_part(&self, cell: usize) -> f64 {
        (-self.raw[cell]).max(0) as f64 * self.unit
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|c| self.value(c)).collect()
    }

    /// Sum over all cells, computed in exact units.
    pub fn total(&self) -> f64 {
        self.raw.iter().sum::<i64>() as f64 * self.unit
    }

    /// Total variation `Σ |value|` (Jordan decomposition per cell).
    pub fn variation(&self) -> f64 {
        self.raw.iter().map(|r| r.abs()).sum::<i64>() as f64 * self.unit
    }

    /// Exact integer representation and its unit.
    pub fn raw(&self) -> (&[i64], f64) {
        (&self.raw, self.unit)
    }
}

/// Localized `C_0`, `C_{d-1}` and `C_d` on a common partition.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizedFunctionals {
    pub dim: usize,
    pub euler: SignedCellMeasure,
    pub boundary: SignedCellMeasure,
    pub volume: SignedCellMeasure,
}

impl LocalizedFunctionals {
    pub fn by_k(&self, k: usize) -> &SignedCellMeasure {
        match (self.dim, k) {
            (_, 0) => &self.euler,
            (1, 1) | (2, 2) => &self.volume,
            (2, 1) => &self.boundary,
            _ => panic!("C_{k} is not defined in dimension {}", self.dim),
        }
    }
}
