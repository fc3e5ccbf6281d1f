//! Exact functionals of finite unions of closed intervals.

use super::{CellPartition, FunctionalVector, LocalizedFunctionals, SignedCellMeasure};
use crate::error::{invalid, Result};
use crate::geometry::IntervalSet;

/// Lengths are localized in units of `2^-48`.
const LENGTH_UNIT: f64 = 1.0 / 281_474_976_710_656.0;

/// `C_0` = number of components, `C_1` = total length.
pub fn interval_functionals(iv: &IntervalSet) -> FunctionalVector {
    let chi = iv.components() as i64;
    FunctionalVector {
        chi,
        half_boundary: chi as f64,
        volume: iv.length(),
    }
}

/// Localization on a partition of the line: `C_0` has an atom `½` at every
/// endpoint, `C_1` is Lebesgue measure on the intervals.
pub fn interval_localized(iv: &IntervalSet, partition: &dyn CellPartition) -> Result<LocalizedFunctionals> {
    let n = partition.len();
    let mut euler = vec![0i64; n];
    let mut length = vec![0i64; n];
    let locate = |x: f64| -> Result<usize> {
        match partition.locate([x, 0.0]) {
            Some(c) => Ok(c),
            None => invalid(format!("partition does not cover x = {x}")),
        }
    };
    let cuts = partition.breakpoints_x();
    for &(a, b) in iv.intervals() {
        euler[locate(a)?] += 1;
        euler[locate(b)?] += 1;
        let lo = cuts.partition_point(|&c| c <= a);
        let hi = cuts.partition_point(|&c| c < b);
        let mut points = vec![a];
        points.extend_from_slice(&cuts[lo..hi]);
        points.push(b);
        for w in points.windows(2) {
            if w[1] > w[0] {
                let c = locate(0.5 * (w[0] + w[1]))?;
                length[c] += ((w[1] - w[0]) / LENGTH_UNIT).round() as i64;
            }
        }
    }
    let euler = SignedCellMeasure::new(0.5, euler);
    Ok(LocalizedFunctionals {
        dim: 1,
        boundary: euler.clone(),
        euler,
        volume: SignedCellMeasure::new(LENGTH_UNIT, length),
    })
}
