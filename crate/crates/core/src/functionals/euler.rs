//! Euler characteristic of the closed-pixel complex.

use crate::geometry::BinaryGrid;

/// Neighbourhood mask bits of the four pixels around a lattice corner.
pub(crate) const SW: u8 = 1;
pub(crate) const SE: u8 = 2;
pub(crate) const NW: u8 = 4;
pub(crate) const NE: u8 = 8;

/// Four times the local Euler density at a lattice corner: the corner itself,
/// half of each incident edge and a quarter of each incident face.
pub(crate) const QUARTER_DENSITY: [i8; 16] = build_density_table();

const fn build_density_table() -> [i8; 16] {
    let mut t = [0i8; 16];
    let mut m = 0;
    while m < 16 {
        let sw = (m & 1) != 0;
        let se = (m & 2) != 0;
        let nw = (m & 4) != 0;
        let ne = (m & 8) != 0;
        let vertex = (m != 0) as i8;
        let edges = (se || ne) as i8 + (sw || nw) as i8 + (nw || ne) as i8 + (sw || se) as i8;
        let faces = sw as i8 + se as i8 + nw as i8 + ne as i8;
        t[m] = 4 * vertex - 2 * edges + faces;
        m += 1;
    }
    t
}

#[inline]
pub(crate) fn corner_mask(grid: &BinaryGrid, i: usize, j: usize) -> u8 {
    let (i, j) = (i as isize, j as isize);
    ((grid.get_signed(i - 1, j - 1) as u8) * SW)
        | ((grid.get_signed(i, j - 1) as u8) * SE)
        | ((grid.get_signed(i - 1, j) as u8) * NW)
        | ((grid.get_signed(i, j) as u8) * NE)
}

/// Vertex, edge and face counts of the union of closed occupied pixels.
pub fn complex_counts(grid: &BinaryGrid) -> (i64, i64, i64) {
    let (w, h) = (grid.spec.width, grid.spec.height);
    let (mut v, mut e, mut f) = (0i64, 0i64, 0i64);
    for j in 0..=h {
        for i in 0..=w {
            let m = corner_mask(grid, i, j);
            if m != 0 {
                v += 1;
            }
            // edge to the east of this corner and edge to the north
            if m & (SE | NE) != 0 {
                e += 1;
            }
            if m & (NW | NE) != 0 {
                e += 1;
            }
            if m & NE != 0 {
                f += 1;
            }
        }
    }
    (v, e, f)
}

/// `V - E + F` of the closed-pixel complex.
pub fn euler_characteristic(grid: &BinaryGrid) -> i64 {
    let (v, e, f) = complex_counts(grid);
    v - e + f
}

/// Components (8-adjacency) minus bounded background components (4-adjacency).
pub fn euler_cross_check(grid: &BinaryGrid) -> i64 {
    let (w, h) = (grid.spec.width, grid.spec.height);
    // background is padded by one ring so that the unbounded component is connected
    let (pw, ph) = (w + 2, h + 2);
    let fg = |i: usize, j: usize| i >= 1 && j >= 1 && i <= w && j <= h && grid.get(i - 1, j - 1);
    let mut seen = vec![false; pw * ph];
    let mut stack = Vec::new();
    let mut flood = |start: (usize, usize), foreground: bool, seen: &mut Vec<bool>| {
        stack.clear();
        stack.push(start);
        seen[start.1 * pw + start.0] = true;
        while let Some((i, j)) = stack.pop() {
            for dj in -1isize..=1 {
                for di in -1isize..=1 {
                    if (di == 0 && dj == 0) || (!foreground && di != 0 && dj != 0) {
                        continue;
                    }
                    let (ni, nj) = (i as isize + di, j as isize + dj);
                    if ni < 0 || nj < 0 || ni >= pw as isize || nj >= ph as isize {
                        continue;
                    }
                    let (ni, nj) = (ni as usize, nj as usize);
                    let k = nj * pw + ni;
                    if !seen[k] && fg(ni, nj) == foreground {
                        seen[k] = true;
                        stack.push((ni, nj));
                    }
                }
            }
        }
    };
    let mut components = 0i64;
    let mut background = 0i64;
    for j in 0..ph {
        for i in 0..pw {
            if seen[j * pw + i] {
                continue;
            }
            let foreground = fg(i, j);
            flood((i, j), foreground, &mut seen);
            if foreground {
                components += 1;
            } else {
                background += 1;
            }
        }
    }
    // the outer ring is one unbounded background component
    components - (background - 1)
}
