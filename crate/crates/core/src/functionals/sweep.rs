//! Single-pass evaluation of the curvature functionals of `{d ≤ ε}` on a distance grid.
//!
//! Each lattice corner of the pixel grid is visited once. Its four surrounding
//! pixels determine
//!
//! * the local Euler density (corner + ½ per incident edge + ¼ per incident face),
//!   which sums to `V − E + F` of the closed-pixel complex,
//! * the marching-squares contour pieces inside the dual square spanned by the
//!   four pixel centres, interpolated linearly on the exact distances,
//! * the occupancy of its north-east pixel (area).
//!
//! Contour lengths are accumulated in fixed point (`2^-32` cells), so all sums
//! are exact and independent of summation order.

use super::euler::{corner_mask, NE, NW, QUARTER_DENSITY, SE, SW};
use super::{CellPartition, FunctionalVector, LocalizedFunctionals, SignedCellMeasure};
use crate::error::{invalid, Error, Result};
use crate::geometry::{BinaryGrid, DistanceGrid, GridSpec};
use crate::Point;

const LENGTH_QUANTUM: f64 = 4_294_967_296.0; // 2^32

/// Corners of the dual square relative to the lattice corner, in cells.
const DUAL: [[f64; 2]; 4] = [[-0.5, -0.5], [0.5, -0.5], [-0.5, 0.5], [0.5, 0.5]];
/// Dual-square edges as corner pairs: bottom, right, top, left.
const EDGES: [(usize, usize); 4] = [(0, 1), (1, 3), (2, 3), (0, 2)];

/// Contour segments of one dual square as pairs of crossed edges.
fn segments(mask: u8) -> &'static [(usize, usize)] {
    match mask {
        0 | 15 => &[],
        // saddles: the occupied diagonal stays connected
        m if m == SW | NE => &[(0, 1), (3, 2)],
        m if m == SE | NW => &[(0, 3), (1, 2)],
        m => {
            const ALL: [[(usize, usize); 1]; 16] = build_single();
            &ALL[m as usize]
        }
    }
}

const fn build_single() -> [[(usize, usize); 1]; 16] {
    let mut out = [[(0usize, 0usize); 1]; 16];
    let mut m = 1;
    while m < 15 {
        let mut found = [0usize; 2];
        let mut n = 0;
        let mut e = 0;
        while e < 4 {
            let (a, b) = EDGES[e];
            let ia = (m >> a) & 1;
            let ib = (m >> b) & 1;
            if ia != ib && n < 2 {
                found[n] = e;
                n += 1;
            }
            e += 1;
        }
        out[m] = [(found[0], found[1])];
        m += 1;
    }
    out
}

/// Per-cell labels of lattice corners and pixel centres.
struct LabelMap {
    vertex: Vec<u16>,
    pixel: Vec<u16>,
}

/// Non-zero Euler density at a lattice corner, in quarter units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EulerVertex {
    pub i: usize,
    pub j: usize,
    pub quarters: i8,
}

/// Result of one evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct GridEvaluation {
    pub eps: f64,
    pub functionals: FunctionalVector,
    pub localized: Option<LocalizedFunctionals>,
    /// `Σ |C_0|` over lattice-aligned blocks (Jordan decomposition proxy for `C_0^var`).
    pub euler_variation_proxy: Option<f64>,
}

/// Evaluates parallel sets `{d ≤ ε}` of one distance grid, optionally localized.
pub struct GridEvaluator<'a> {
    dg: &'a DistanceGrid,
    partition: Option<(&'a dyn CellPartition, LabelMap)>,
}

impl<'a> GridEvaluator<'a> {
    pub fn new(dg: &'a DistanceGrid) -> Self {
        GridEvaluator { dg, partition: None }
    }

    /// Precomputes the cell labels of all corners and pixel centres.
    pub fn with_partition(dg: &'a DistanceGrid, partition: &'a dyn CellPartition) -> Result<Self> {
        if partition.len() >= u16::MAX as usize {
            return invalid("partition has too many cells");
        }
        let s = dg.spec;
        let label = |p: Point| -> Result<u16> {
            match partition.locate(p) {
                Some(c) => Ok(c as u16),
                None => invalid(format!("partition does not cover the grid at ({}, {})", p[0], p[1])),
            }
        };
        let mut vertex = Vec::with_capacity((s.width + 1) * (s.height + 1));
        for j in 0..=s.height {
            for i in 0..=s.width {
                vertex.push(label(s.corner(i, j))?);
            }
        }
        let mut pixel = Vec::with_capacity(s.len());
        for j in 0..s.height {
            for i in 0..s.width {
                pixel.push(label(s.center(i, j))?);
            }
        }
        Ok(GridEvaluator {
            dg,
            partition: Some((partition, LabelMap { vertex, pixel })),
        })
    }

    pub fn spec(&self) -> GridSpec {
        self.dg.spec
    }

    fn check(&self, eps: f64) -> Result<()> {
        let h = self.dg.spec.h;
        if !(eps >= 4.0 * h) {
            return Err(Error::Resolution { eps, min: 4.0 * h, h });
        }
        let margin = self.dg.margin();
        if eps + 2.0 * h > margin {
            return Err(Error::Margin { eps, margin });
        }
        Ok(())
    }

    /// Functionals of `{d ≤ eps}`; `proxy_block` (in cells) enables the block
    /// Jordan-decomposition proxy of the Euler variation.
    pub fn evaluate(&self, eps: f64, proxy_block: Option<usize>) -> Result<GridEvaluation> {
        self.check(eps)?;
        Ok(self.evaluate_unchecked(eps, proxy_block))
    }

    pub(crate) fn evaluate_unchecked(&self, eps: f64, proxy_block: Option<usize>) -> GridEvaluation {
        let s = self.dg.spec;
        let (w, ht) = (s.width, s.height);
        let line = s.is_line();
        let t = self.dg.threshold(eps);
        let level = eps / s.h;
        let sq = self.dg.squared_cells();
        let occ = |i: isize, j: isize| -> bool {
            i >= 0 && j >= 0 && (i as usize) < w && (j as usize) < ht && (sq[j as usize * w + i as usize] as i64) <= t
        };
        let dist = |i: isize, j: isize| -> f64 {
            if i >= 0 && j >= 0 && (i as usize) < w && (j as usize) < ht {
                (sq[j as usize * w + i as usize] as f64).sqrt()
            } else {
                f64::INFINITY
            }
        };

        let ncells = self.partition.as_ref().map_or(0, |(p, _)| p.len());
        let mut cell_euler = vec![0i64; ncells];
        let mut cell_len = vec![0i64; ncells];
        let mut cell_area = vec![0i64; ncells];

        let block = proxy_block.map(|b| b.max(1));
        let nblocks = block.map_or(0, |b| (w + 1) / b + 1);
        let mut band = vec![0i64; nblocks];
        let mut band_index = 0usize;
        let mut proxy_total = 0i64;

        let mut quarters = 0i64;
        let mut len_q = 0i64;
        let mut area = 0i64;

        for j in 0..=ht {
            if let Some(b) = block {
                if j / b != band_index {
                    proxy_total += band.iter().map(|v| v.abs()).sum::<i64>();
                    band.iter_mut().for_each(|v| *v = 0);
                    band_index = j / b;
                }
            }
            let (ji, jm) = (j as isize, j as isize - 1);
            for i in 0..=w {
                let (ii, im) = (i as isize, i as isize - 1);
                let m = ((occ(im, jm) as u8) * SW)
                    | ((occ(ii, jm) as u8) * SE)
                    | ((occ(im, ji) as u8) * NW)
                    | ((occ(ii, ji) as u8) * NE);
                if m & NE != 0 {
                    area += 1;
                    if let Some((_, labels)) = &self.partition {
                        cell_area[labels.pixel[j * w + i] as usize] += 1;
                    }
                }
                if m == 0 || m == 15 {
                    continue;
                }
                let qd = QUARTER_DENSITY[m as usize] as i64;
                quarters += qd;
                if let Some(b) = block {
                    band[i / b] += qd;
                }
                let vlabel = self
                    .partition
                    .as_ref()
                    .map(|(_, labels)| labels.vertex[j * (w + 1) + i] as usize);
                if let Some(c) = vlabel {
                    cell_euler[c] += qd;
                }
                if line {
                    continue;
                }
                let d = [dist(im, jm), dist(ii, jm), dist(im, ji), dist(ii, ji)];
                let cross = |e: usize| -> [f64; 2] {
                    let (a, b) = EDGES[e];
                    let tt = if d[b].is_finite() {
                        ((level - d[a]) / (d[b] - d[a])).clamp(0.0, 1.0)
                    } else {
                        0.0
                    };
                    [
                        DUAL[a][0] + tt * (DUAL[b][0] - DUAL[a][0]),
                        DUAL[a][1] + tt * (DUAL[b][1] - DUAL[a][1]),
                    ]
                };
                for &(ea, eb) in segments(m) {
                    let (p, q) = (cross(ea), cross(eb));
                    let l = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt();
                    let lq = (l * LENGTH_QUANTUM).round() as i64;
                    len_q += lq;
                    if let Some((part, labels)) = &self.partition {
                        let c = vlabel.unwrap();
                        let uniform = [(im, jm), (ii, jm), (im, ji), (ii, ji)].iter().all(|&(a, b)| {
                            a >= 0
                                && b >= 0
                                && (a as usize) < w
                                && (b as usize) < ht
                                && labels.pixel[b as usize * w + a as usize] as usize == c
                        });
                        let c = if uniform {
                            c
                        } else {
                            let o = s.corner(i, j);
                            let mid = [o[0] + s.h * (p[0] + q[0]) / 2.0, o[1] + s.h * (p[1] + q[1]) / 2.0];
                            part.locate(mid).unwrap_or(c)
                        };
                        cell_len[c] += lq;
                    }
                }
            }
        }
        if block.is_some() {
            proxy_total += band.iter().map(|v| v.abs()).sum::<i64>();
        }

        debug_assert_eq!(quarters % 4, 0);
        let chi = quarters / 4;
        let len_unit = s.h / LENGTH_QUANTUM / 2.0;
        let (vol_unit, half_boundary) = if line {
            (s.h, chi as f64)
        } else {
            (s.h * s.h, len_q as f64 * len_unit)
        };
        let functionals = FunctionalVector {
            chi,
            half_boundary,
            volume: area as f64 * vol_unit,
        };
        let localized = self.partition.as_ref().map(|_| {
            let euler = SignedCellMeasure::new(0.25, cell_euler.clone());
            LocalizedFunctionals {
                dim: if line { 1 } else { 2 },
                boundary: if line {
                    euler.clone()
                } else {
                    SignedCellMeasure::new(len_unit, cell_len)
                },
                euler,
                volume: SignedCellMeasure::new(vol_unit, cell_area),
            }
        });
        GridEvaluation {
            eps,
            functionals,
            localized,
            euler_variation_proxy: block.map(|_| proxy_total as f64 / 4.0),
        }
    }

    /// Lattice corners with non-zero Euler density for `{d ≤ eps}`.
    pub fn euler_vertices(&self, eps: f64) -> Vec<EulerVertex> {
        let threshold = threshold_grid(self.dg, eps);
        let s = self.dg.spec;
        let mut out = Vec::new();
        for j in 0..=s.height {
            for i in 0..=s.width {
                let q = QUARTER_DENSITY[corner_mask(&threshold, i, j) as usize];
                if q != 0 {
                    out.push(EulerVertex { i, j, quarters: q });
                }
            }
        }
        out
    }
}

fn threshold_grid(dg: &DistanceGrid, eps: f64) -> BinaryGrid {
    crate::geometry::threshold_unchecked(dg, eps)
}

fn check_pair(grid: &BinaryGrid, dg: &DistanceGrid, eps: f64) -> Result<()> {
    if grid.spec != dg.spec {
        return invalid("occupancy grid and distance grid have different geometry");
    }
    let t = dg.threshold(eps);
    if grid
        .cells()
        .iter()
        .zip(dg.squared_cells())
        .any(|(&c, &s)| c != ((s as i64) <= t))
    {
        return invalid("occupancy grid is not the parallel set of the distance grid at eps");
    }
    Ok(())
}

/// `C_0`, `C_1`, `C_2` of the parallel set `grid = {d ≤ eps}`.
pub fn minkowski_functionals(grid: &BinaryGrid, dg: &DistanceGrid, eps: f64) -> Result<FunctionalVector> {
    check_pair(grid, dg, eps)?;
    Ok(GridEvaluator::new(dg).evaluate(eps, None)?.functionals)
}

/// Localized `C_0`, `C_1`, `C_2` of `grid = {d ≤ eps}` on `partition`.
pub fn localized_functionals(
    grid: &BinaryGrid,
    dg: &DistanceGrid,
    eps: f64,
    partition: &dyn CellPartition,
) -> Result<LocalizedFunctionals> {
    check_pair(grid, dg, eps)?;
    let ev = GridEvaluator::with_partition(dg, partition)?.evaluate(eps, None)?;
    Ok(ev.localized.expect("partition was supplied"))
}

/// Functionals of a bare binary grid without a distance field: Euler
/// characteristic, half the staircase perimeter and the pixel area.
pub fn pixel_functionals(grid: &BinaryGrid) -> FunctionalVector {
    let s = grid.spec;
    let mut edges = 0i64;
    for j in 0..s.height as isize {
        for i in 0..s.width as isize {
            if !grid.get_signed(i, j) {
                continue;
            }
            for (di, dj) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                if !grid.get_signed(i + di, j + dj) {
                    edges += 1;
                }
            }
        }
    }
    let chi = super::euler_characteristic(grid);
    let count = grid.count() as f64;
    if s.is_line() {
        FunctionalVector {
            chi,
            half_boundary: chi as f64,
            volume: count * s.h,
        }
    } else {
        FunctionalVector {
            chi,
            half_boundary: edges as f64 * s.h / 2.0,
            volume: count * s.h * s.h,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::{euler_characteristic, euler_cross_check, AxisPartition};
    use crate::geometry::{distance_transform, parallel_set};
    use rand::{Rng, SeedableRng};

    fn single_seed(n: usize, h: f64) -> DistanceGrid {
        let o = -(n as f64) * h / 2.0;
        let spec = GridSpec::new([o, o], h, n, n).unwrap();
        let mut seeds = BinaryGrid::empty(spec);
        seeds.set(n / 2, n / 2, true);
        distance_transform(&seeds).unwrap()
    }

    #[test]
    fn single_pixel_fallback() {
        let spec = GridSpec::new([0.0, 0.0], 0.5, 3, 3).unwrap();
        let mut g = BinaryGrid::empty(spec);
        g.set(1, 1, true);
        let f = pixel_functionals(&g);
        assert_eq!(f.chi, 1);
        assert_eq!(f.half_boundary, 2.0 * 0.5);
        assert_eq!(f.volume, 0.25);
    }

    #[test]
    fn annulus_pixels() {
        let spec = GridSpec::new([0.0, 0.0], 1.0, 5, 5).unwrap();
        let mut g = BinaryGrid::empty(spec);
        for j in 1..4 {
            for i in 1..4 {
                g.set(i, j, !(i == 2 && j == 2));
            }
        }
        assert_eq!(pixel_functionals(&g).chi, 0);
    }

    #[test]
    fn digitized_disk() {
        let h = 1.0 / 256.0;
        // the seed sits on a cell centre, so the disk is centred on it
        let dg = single_seed(2 * 256 + 40, h);
        let grid = parallel_set(&dg, 1.0).unwrap();
        let f = minkowski_functionals(&grid, &dg, 1.0).unwrap();
        let pi = std::f64::consts::PI;
        assert_eq!(f.chi, 1);
        assert!((f.half_boundary - pi).abs() < 0.02 * pi, "{}", f.half_boundary);
        assert!((f.volume - pi).abs() < 0.01 * pi, "{}", f.volume);
        assert_eq!(f.volume, grid.count() as f64 * h * h);
    }

    #[test]
    fn resolution_and_consistency_errors() {
        let h = 0.01;
        let dg = single_seed(101, h);
        let g = parallel_set(&dg, 0.03).unwrap();
        assert!(matches!(
            minkowski_functionals(&g, &dg, 0.03),
            Err(Error::Resolution { .. })
        ));
        let g = parallel_set(&dg, 0.1).unwrap();
        assert!(minkowski_functionals(&g, &dg, 0.2).is_err());
        assert!(matches!(
            GridEvaluator::new(&dg).evaluate(0.49, None),
            Err(Error::Margin { .. })
        ));
    }

    fn random_dg(rng: &mut impl Rng, n: usize, seeds: usize) -> DistanceGrid {
        let spec = GridSpec::new([0.0, 0.0], 1.0 / n as f64, n, n).unwrap();
        let mut g = BinaryGrid::empty(spec);
        for _ in 0..seeds {
            g.set(rng.gen_range(n / 4..3 * n / 4), rng.gen_range(n / 4..3 * n / 4), true);
        }
        distance_transform(&g).unwrap()
    }

    #[test]
    fn euler_agrees_with_flood_fill_on_parallel_sets() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let dg = random_dg(&mut rng, 64, 6);
            let eps = rng.gen_range(4.0..14.0) / 64.0;
            let g = parallel_set(&dg, eps).unwrap();
            let f = minkowski_functionals(&g, &dg, eps).unwrap();
            assert_eq!(f.chi, euler_characteristic(&g));
            assert_eq!(f.chi, euler_cross_check(&g));
        }
    }

    #[test]
    fn single_cell_partition_reproduces_global() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let dg = random_dg(&mut rng, 64, 8);
        let eps = 6.0 / 64.0;
        let g = parallel_set(&dg, eps).unwrap();
        let global = minkowski_functionals(&g, &dg, eps).unwrap();
        let whole = AxisPartition::whole();
        let loc = localized_functionals(&g, &dg, eps, &whole).unwrap();
        assert_eq!(loc.euler.value(0), global.chi as f64);
        assert_eq!(loc.boundary.value(0), global.half_boundary);
        assert_eq!(loc.volume.value(0), global.volume);
    }

    #[test]
    fn sixteen_cells_add_up_exactly() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let dg = random_dg(&mut rng, 48, 5);
            let eps = rng.gen_range(4.0..10.0) / 48.0;
            let g = parallel_set(&dg, eps).unwrap();
            let global = minkowski_functionals(&g, &dg, eps).unwrap();
            let part = AxisPartition::uniform([0.0, 0.0], [1.0, 1.0], 4, 4).unwrap();
            let loc = localized_functionals(&g, &dg, eps, &part).unwrap();
            assert_eq!(loc.euler.total(), global.chi as f64);
            assert_eq!(loc.boundary.total(), global.half_boundary);
            assert_eq!(loc.volume.total(), global.volume);
            for c in 0..16 {
                let m = &loc.euler;
                assert_eq!(m.value(c), m.positive_part(c) - m.negative_part(c));
            }
        }
    }

    #[test]
    fn split_square_halves_area() {
        // a 2×2 block of pixels around the origin, split by x = 0
        let h = 0.25;
        let spec = GridSpec::new([-2.0, -2.0], h, 16, 16).unwrap();
        let mut seeds = BinaryGrid::empty(spec);
        seeds.set(7, 7, true);
        seeds.set(8, 7, true);
        seeds.set(7, 8, true);
        seeds.set(8, 8, true);
        let dg = distance_transform(&seeds).unwrap();
        let part = AxisPartition::new(vec![-2.0, 0.0, 2.0], vec![-2.0, 2.0]).unwrap();
        let ev = GridEvaluator::with_partition(&dg, &part)
            .unwrap()
            .evaluate_unchecked(0.0, None);
        let loc = ev.localized.unwrap();
        assert_eq!(loc.volume.value(0), 2.0 * h * h);
        assert_eq!(loc.volume.value(1), 2.0 * h * h);
        let g = parallel_set(&dg, 1.0).unwrap();
        let loc = localized_functionals(&g, &dg, 1.0, &part).unwrap();
        assert_eq!(loc.volume.value(0), loc.volume.value(1));
        assert_eq!(loc.euler.value(0), 0.5);
    }

    #[test]
    fn uncovered_partition_is_rejected() {
        let dg = single_seed(40, 0.05);
        let part = AxisPartition::uniform([0.0, 0.0], [1.0, 1.0], 2, 2).unwrap();
        assert!(GridEvaluator::with_partition(&dg, &part).is_err());
    }

    #[test]
    fn line_grid_counts_components() {
        let h = 0.01;
        let spec = GridSpec::new([0.0, -h / 2.0], h, 300, 1).unwrap();
        let mut seeds = BinaryGrid::empty(spec);
        seeds.set(100, 0, true);
        seeds.set(200, 0, true);
        let dg = distance_transform(&seeds).unwrap();
        let ev = GridEvaluator::new(&dg);
        let a = ev.evaluate(0.2, None).unwrap().functionals;
        assert_eq!(a.chi, 2);
        assert_eq!(a.half_boundary, 2.0);
        assert!((a.volume - 2.0 * (0.4 + h)).abs() < 1e-12);
        let b = ev.evaluate(0.6, None).unwrap().functionals;
        assert_eq!(b.chi, 1);
    }

    #[test]
    fn proxy_equals_chi_for_convex_sets() {
        let dg = single_seed(200, 0.01);
        let ev = GridEvaluator::new(&dg).evaluate(0.5, Some(4)).unwrap();
        assert_eq!(ev.functionals.chi, 1);
        let p = ev.euler_variation_proxy.unwrap();
        assert!(p >= 1.0);
        // every block sees a convex piece of the rim: the proxy stays close to 1
        assert!(p < 40.0, "{p}");
    }

    #[test]
    fn euler_vertices_sum_to_chi() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let dg = random_dg(&mut rng, 64, 6);
        let ev = GridEvaluator::new(&dg);
        let f = ev.evaluate(0.1, None).unwrap().functionals;
        let q: i64 = ev.euler_vertices(0.1).iter().map(|v| v.quarters as i64).sum();
        assert_eq!(q, 4 * f.chi);
    }
}
