//! Pixel grids: occupancy, exact Euclidean distance transform and thresholding.

use crate::error::{invalid, Error, Result};
use crate::Point;

/// Lattice metadata shared by binary and distance grids.
///
/// Cell `(i, j)` covers `[x0 + i h, x0 + (i+1) h] × [y0 + j h, y0 + (j+1) h]`;
/// row `j = 0` is the bottom row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub origin: Point,
    pub h: f64,
    pub width: usize,
    pub height: usize,
}

impl GridSpec {
    pub fn new(origin: Point, h: f64, width: usize, height: usize) -> Result<Self> {
        if !(h > 0.0) || width == 0 || height == 0 {
            return invalid(format!("bad grid {width}x{height} with spacing {h}"));
        }
        Ok(Self {
            origin,
            h,
            width,
            height,
        })
    }

    /// Grid covering the box `[lo, hi]`, with `cells` cells along the longer side.
    pub fn covering(lo: Point, hi: Point, cells: usize) -> Result<Self> {
        let ext = (hi[0] - lo[0]).max(hi[1] - lo[1]);
        if !(ext > 0.0) || cells == 0 {
            return invalid("degenerate covering box");
        }
        let h = ext / cells as f64;
        let w = ((hi[0] - lo[0]) / h).ceil().max(1.0) as usize;
        let ht = ((hi[1] - lo[1]) / h).ceil().max(1.0) as usize;
        Self::new(lo, h, w, ht)
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.width + i
    }

    pub fn center(&self, i: usize, j: usize) -> Point {
        [
            self.origin[0] + (i as f64 + 0.5) * self.h,
            self.origin[1] + (j as f64 + 0.5) * self.h,
        ]
    }

    /// Lattice corner `(i, j)`; `0 ≤ i ≤ width`, `0 ≤ j ≤ height`.
    pub fn corner(&self, i: usize, j: usize) -> Point {
        [self.origin[0] + i as f64 * self.h, self.origin[1] + j as f64 * self.h]
    }

    /// Cell containing `p`, if inside the grid.
    pub fn locate(&self, p: Point) -> Option<(usize, usize)> {
        let fx = ((p[0] - self.origin[0]) / self.h).floor();
        let fy = ((p[1] - self.origin[1]) / self.h).floor();
        if fx < 0.0 || fy < 0.0 || fx >= self.width as f64 || fy >= self.height as f64 {
            return None;
        }
        Some((fx as usize, fy as usize))
    }

    /// Single-row grids represent the line.
    pub fn is_line(&self) -> bool {
        self.height == 1
    }
}

/// Occupancy of a pixel grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryGrid {
    pub spec: GridSpec,
    cells: Vec<bool>,
}

impl BinaryGrid {
    pub fn empty(spec: GridSpec) -> Self {
        Self {
            spec,
            cells: vec![false; spec.len()],
        }
    }

    pub fn from_cells(spec: GridSpec, cells: Vec<bool>) -> Result<Self> {
        if cells.len() != spec.len() {
            return invalid(format!(
                "occupancy length {} does not match {}x{}",
                cells.len(),
                spec.width,
                spec.height
            ));
        }
        Ok(Self { spec, cells })
    }

    /// Marks the cells containing the given points; points outside are ignored.
    pub fn from_points(spec: GridSpec, points: &[Point]) -> Self {
        let mut g = Self::empty(spec);
        for &p in points {
            if let Some((i, j)) = spec.locate(p) {
                g.set(i, j, true);
            }
        }
        g
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cells[self.spec.index(i, j)]
    }

    /// Occupancy with everything outside the grid empty.
    #[inline]
    pub fn get_signed(&self, i: isize, j: isize) -> bool {
        if i < 0 || j < 0 || i as usize >= self.spec.width || j as usize >= self.spec.height {
            return false;
        }
        self.get(i as usize, j as usize)
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let k = self.spec.index(i, j);
        self.cells[k] = v;
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    /// Binary PGM (P5, maxval 255); occupied cells black, top row first.
    pub fn to_pgm(&self) -> Vec<u8> {
        let GridSpec { width, height, .. } = self.spec;
        let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
        out.reserve(width * height);
        for j in (0..height).rev() {
            out.extend((0..width).map(|i| if self.get(i, j) { 0u8 } else { 255u8 }));
        }
        out
    }
}

/// Exact squared distances (in cell units) from each cell centre to the nearest seed centre.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceGrid {
    pub spec: GridSpec,
    sq: Vec<u32>,
    /// Seed bounding box in cells: (i_min, j_min, i_max, j_max).
    seed_box: (usize, usize, usize, usize),
}

impl DistanceGrid {
    #[inline]
    pub fn squared(&self, i: usize, j: usize) -> u32 {
        self.sq[self.spec.index(i, j)]
    }

    pub fn squared_cells(&self) -> &[u32] {
        &self.sq
    }

    /// World-unit distance at cell `(i, j)`.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.spec.h * (self.squared(i, j) as f64).sqrt()
    }

    /// Largest squared cell distance `s` with `h √s ≤ ε` (ties within 1e-15 count as inside).
    pub fn threshold(&self, eps: f64) -> i64 {
        squared_threshold(self.spec.h, eps)
    }

    /// Distance from the seed centres to the nearest grid border, in world units.
    pub fn margin(&self) -> f64 {
        let s = &self.spec;
        let (i0, j0, i1, j1) = self.seed_box;
        let mut m = (i0 as f64 + 0.5).min(s.width as f64 - 0.5 - i1 as f64);
        if !s.is_line() {
            m = m.min(j0 as f64 + 0.5).min(s.height as f64 - 0.5 - j1 as f64);
        }
        m * s.h
    }

    pub fn max_squared(&self) -> u32 {
        self.sq.iter().copied().max().unwrap_or(0)
    }
}

pub(crate) fn squared_threshold(h: f64, eps: f64) -> i64 {
    if eps < 0.0 {
        return -1;
    }
    let tol = 1e-15 * eps.max(1.0);
    let inside = |s: i64| h * (s as f64).sqrt() <= eps + tol;
    let mut t = ((eps / h) * (eps / h)).floor().min(4e18) as i64;
    while inside(t + 1) {
        t += 1;
    }
    while t >= 0 && !inside(t) {
        t -= 1;
    }
    t
}

/// Exact Euclidean distance transform (separable lower-envelope scan on squared
/// integer distances).
pub fn distance_transform(seeds: &BinaryGrid) -> Result<DistanceGrid> {
    let spec = seeds.spec;
    let (m, n) = (spec.width, spec.height);
    let mut seed_box = (usize::MAX, usize::MAX, 0, 0);
    for j in 0..n {
        for i in 0..m {
            if seeds.get(i, j) {
                seed_box.0 = seed_box.0.min(i);
                seed_box.1 = seed_box.1.min(j);
                seed_box.2 = seed_box.2.max(i);
                seed_box.3 = seed_box.3.max(j);
            }
        }
    }
    if seed_box.0 == usize::MAX {
        return invalid("distance transform needs at least one seed cell");
    }
    let inf = (m + n) as i64;

    // column pass: vertical distance to the nearest seed in the same column
    let mut g = vec![0i64; m * n];
    for i in 0..m {
        let idx = |j: usize| j * m + i;
        g[idx(0)] = if seeds.get(i, 0) { 0 } else { inf };
        for j in 1..n {
            g[idx(j)] = if seeds.get(i, j) {
                0
            } else {
                (g[idx(j - 1)] + 1).min(inf)
            };
        }
        for j in (0..n.saturating_sub(1)).rev() {
            if g[idx(j + 1)] < g[idx(j)] {
                g[idx(j)] = g[idx(j + 1)] + 1;
            }
        }
    }

    // row pass: lower envelope of parabolas (x - u)^2 + g(u)^2
    let mut sq = vec![0u32; m * n];
    let mut s = vec![0usize; m];
    let mut t = vec![0i64; m];
    for j in 0..n {
        let row = &g[j * m..(j + 1) * m];
        let f = |x: i64, u: usize| (x - u as i64).pow(2) + row[u] * row[u];
        let sep = |a: usize, b: usize| {
            let (ai, bi) = (a as i64, b as i64);
            (bi * bi - ai * ai + row[b] * row[b] - row[a] * row[a]).div_euclid(2 * (bi - ai))
        };
        let mut q: isize = 0;
        s[0] = 0;
        t[0] = 0;
        for u in 1..m {
            while q >= 0 && f(t[q as usize], s[q as usize]) > f(t[q as usize], u) {
                q -= 1;
            }
            if q < 0 {
                q = 0;
                s[0] = u;
            } else {
                let w = 1 + sep(s[q as usize], u);
                if w < m as i64 {
                    q += 1;
                    s[q as usize] = u;
                    t[q as usize] = w;
                }
            }
        }
        for u in (0..m).rev() {
            let d = f(u as i64, s[q as usize]);
            sq[j * m + u] = u32::try_from(d)
                .map_err(|_| Error::InvalidInput("grid too large for 32-bit squared distances".into()))?;
            if u as i64 == t[q as usize] {
                q -= 1;
            }
        }
    }
    Ok(DistanceGrid { spec, sq, seed_box })
}

/// Occupancy of `{x : dist(x, seeds) ≤ ε}` at cell centres.
pub fn parallel_set(dg: &DistanceGrid, eps: f64) -> Result<BinaryGrid> {
    if !(eps >= 0.0) {
        return Err(Error::OutOfRange {
            what: "eps",
            value: eps,
            range: "[0, inf)".into(),
        });
    }
    let margin = dg.margin();
    if eps + 2.0 * dg.spec.h > margin {
        return Err(Error::Margin { eps, margin });
    }
    Ok(threshold_unchecked(dg, eps))
}

/// Thresholding without the margin check (for grids that intentionally clip).
pub fn threshold_unchecked(dg: &DistanceGrid, eps: f64) -> BinaryGrid {
    let t = dg.threshold(eps);
    let cells = dg.sq.iter().map(|&s| (s as i64) <= t).collect();
    BinaryGrid { spec: dg.spec, cells }
}
