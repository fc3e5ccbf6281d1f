//! Discrete parallel sets: interval unions, distance grids and open-set images.

mod grid;
mod interval;
mod polygon;
mod scene;

pub use grid::{distance_transform, parallel_set, threshold_unchecked, BinaryGrid, DistanceGrid, GridSpec};
pub use interval::{parallel_intervals, parallel_points, IntervalSet};
pub use polygon::{point_segment_distance, Polygon, Region};
pub use scene::{attractor_bbox, rasterize_attractor, scene_grid, spec_with_spacing};

use crate::error::Result;
use crate::ifs::{Ifs, Word};
use crate::Point;

/// `O(r) = ⋃_{σ∈Σ(r)} S_σ O`, as the list of its (pairwise disjoint) pieces.
pub fn open_set_union(ifs: &Ifs, r: f64) -> Result<Vec<(Word, Region)>> {
    let words = ifs.stopping_set(r)?;
    words
        .words
        .into_iter()
        .map(|w| {
            let m = ifs.word_map(&w)?;
            Ok((w, ifs.open_set().map(&m)))
        })
        .collect()
}

/// Signed distance from `point` to a polygon or interval region.
pub fn signed_region_distance(point: Point, region: &Region) -> f64 {
    region.signed_distance(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::catalog::{cantor, sierpinski_gasket};

    #[test]
    fn gasket_level_one_triangles() {
        let g = sierpinski_gasket();
        let pieces = open_set_union(&g, g.reference_radius()).unwrap();
        assert_eq!(pieces.len(), 3);
        for (_, r) in &pieces {
            match r {
                Region::Polygon(p) => {
                    let area = 3f64.sqrt() / 16.0;
                    assert!((p.area() - area).abs() < 1e-14);
                }
                _ => panic!(),
            }
        }
        for i in 0..3 {
            for j in (i + 1)..3 {
                assert!(!pieces[i].1.overlaps(&pieces[j].1));
            }
        }
    }

    #[test]
    fn cantor_level_two_intervals() {
        let c = cantor().with_reference_radius(1.5).unwrap();
        let pieces = open_set_union(&c, 0.4).unwrap();
        assert_eq!(pieces.len(), 4);
        for (_, r) in &pieces {
            if let Region::Interval(a, b) = r {
                assert!((b - a - 1.0 / 9.0).abs() < 1e-15);
            }
        }
        for i in 0..4 {
            for j in (i + 1)..4 {
                assert!(!pieces[i].1.overlaps(&pieces[j].1));
            }
        }
    }
}
