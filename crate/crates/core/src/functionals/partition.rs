//! Cell partitions used to localize curvature measures.

use crate::error::{invalid, Result};
use crate::geometry::Region;
use crate::Point;

/// A partition of (part of) the plane into finitely many labelled cells.
pub trait CellPartition: Sync {
    /// Number of cells.
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cell containing `p`, or `None` if `p` is not covered.
    fn locate(&self, p: Point) -> Option<usize>;

    /// Abscissae at which the cell of a point on the x-axis can change
    /// (used to split intervals on the line).
    fn breakpoints_x(&self) -> Vec<f64>;
}

/// Product of breakpoint lists; cell `(a, b)` is `(xs[a], xs[a+1]] × (ys[b], ys[b+1]]`
/// with the first row and column closed below, so a point on a shared edge
/// belongs to the lower-left cell. Cells are numbered row-major, x fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisPartition {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl AxisPartition {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        for (name, v) in [("x", &xs), ("y", &ys)] {
            if v.len() < 2 {
                return invalid(format!("{name} breakpoints need at least two entries"));
            }
            if v.iter().any(|t| t.is_nan()) || v.windows(2).any(|w| !(w[0] < w[1])) {
                return invalid(format!("{name} breakpoints must be strictly increasing"));
            }
        }
        Ok(AxisPartition { xs, ys })
    }

    /// Partition of the line (all of `y`) at the given abscissae.
    pub fn line(xs: Vec<f64>) -> Result<Self> {
        Self::new(xs, vec![f64::NEG_INFINITY, f64::INFINITY])
    }

    /// Single cell covering the whole plane.
    pub fn whole() -> Self {
        AxisPartition {
            xs: vec![f64::NEG_INFINITY, f64::INFINITY],
            ys: vec![f64::NEG_INFINITY, f64::INFINITY],
        }
    }

    /// `nx × ny` congruent cells over the box `[lo, hi]`.
    pub fn uniform(lo: Point, hi: Point, nx: usize, ny: usize) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return invalid("uniform partition needs at least one cell per axis");
        }
        let split = |a: f64, b: f64, n: usize| -> Vec<f64> {
            (0..=n)
                .map(|i| if i == n { b } else { a + (b - a) * i as f64 / n as f64 })
                .collect()
        };
        Self::new(split(lo[0], hi[0], nx), split(lo[1], hi[1], ny))
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    fn slot(v: &[f64], t: f64) -> Option<usize> {
        if t < v[0] || t > v[v.len() - 1] {
            return None;
        }
        // first k with t ≤ v[k+1]
        let k = v[1..].partition_point(|&b| b < t);
        Some(k.min(v.len() - 2))
    }
}

impl CellPartition for AxisPartition {
    fn len(&self) -> usize {
        (self.xs.len() - 1) * (self.ys.len() - 1)
    }

    fn locate(&self, p: Point) -> Option<usize> {
        let a = Self::slot(&self.xs, p[0])?;
        let b = Self::slot(&self.ys, p[1])?;
        Some(b * (self.xs.len() - 1) + a)
    }

    fn breakpoints_x(&self) -> Vec<f64> {
        self.xs.iter().copied().filter(|x| x.is_finite()).collect()
    }
}

/// Pairwise disjoint open regions plus one complement cell (the last index).
#[derive(Debug, Clone)]
pub struct RegionPartition {
    regions: Vec<Region>,
    lo: Point,
    cell: [f64; 2],
    nb: [usize; 2],
    buckets: Vec<Vec<u32>>,
}

impl RegionPartition {
    pub fn new(regions: Vec<Region>) -> Result<Self> {
        if regions.is_empty() {
            return invalid("region partition needs at least one region");
        }
        if regions.len() >= u16::MAX as usize {
            return invalid("too many regions in partition");
        }
        let line = regions.iter().all(|r| matches!(r, Region::Interval(..)));
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for r in &regions {
            let (a, b) = r.bbox();
            for k in 0..2 {
                lo[k] = lo[k].min(a[k]);
                hi[k] = hi[k].max(b[k]);
            }
        }
        let side = ((regions.len() as f64).sqrt().ceil() as usize * 2).clamp(1, 256);
        let nb = [side, if line { 1 } else { side }];
        let cell = [
            ((hi[0] - lo[0]) / nb[0] as f64).max(f64::MIN_POSITIVE),
            ((hi[1] - lo[1]) / nb[1] as f64).max(f64::MIN_POSITIVE),
        ];
        let mut part = RegionPartition {
            regions,
            lo,
            cell,
            nb,
            buckets: vec![Vec::new(); nb[0] * nb[1]],
        };
        for (idx, r) in part.regions.iter().enumerate() {
            let (a, b) = r.bbox();
            let (i0, j0) = part.bucket_clamped(a);
            let (i1, j1) = part.bucket_clamped(b);
            for j in j0..=j1 {
                for i in i0..=i1 {
                    part.buckets[j * nb[0] + i].push(idx as u32);
                }
            }
        }
        Ok(part)
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    /// Index of the complement cell.
    pub fn complement(&self) -> usize {
        self.regions.len()
    }

    fn bucket_clamped(&self, p: Point) -> (usize, usize) {
        let f = |k: usize| {
            if self.nb[k] == 1 {
                return 0;
            }
            let t = ((p[k] - self.lo[k]) / self.cell[k]).floor();
            t.clamp(0.0, (self.nb[k] - 1) as f64) as usize
        };
        (f(0), f(1))
    }
}

impl CellPartition for RegionPartition {
    fn len(&self) -> usize {
        self.regions.len() + 1
    }

    fn locate(&self, p: Point) -> Option<usize> {
        let (i, j) = self.bucket_clamped(p);
        for &r in &self.buckets[j * self.nb[0] + i] {
            if self.regions[r as usize].contains(p) {
                return Some(r as usize);
            }
        }
        Some(self.regions.len())
    }

    fn breakpoints_x(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .regions
            .iter()
            .flat_map(|r| {
                let (a, b) = r.bbox();
                [a[0], b[0]]
            })
            .collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }
}
