use super::grid::{BinaryGrid, GridSpec};
use crate::error::{invalid, Result};
use crate::ifs::Ifs;
use crate::Point;

/// Bounding box of the attractor (hull vertices).
pub fn attractor_bbox(ifs: &Ifs) -> (Point, Point) {
    let hull = ifs.hull();
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in &hull {
        for a in 0..2 {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    (lo, hi)
}

/// Grid over the attractor box inflated by `eps_max + 4h`, with `cells` cells
/// along the longer side. Line attractors get a single row centred on the axis.
pub fn scene_grid(ifs: &Ifs, cells: usize, eps_max: f64) -> Result<GridSpec> {
    if cells <= 16 {
        return invalid(format!("grid of {cells} cells is too coarse"));
    }
    let (lo, hi) = attractor_bbox(ifs);
    let ext = if ifs.ambient_dim() == 1 {
        hi[0] - lo[0]
    } else {
        (hi[0] - lo[0]).max(hi[1] - lo[1])
    };
    // ext + 2 eps_max + 8h = cells h
    let h = (ext + 2.0 * eps_max) / (cells as f64 - 8.0);
    spec_with_spacing(ifs, h, eps_max)
}

/// Grid of spacing `h` over the attractor box inflated by `eps_max + 4h`.
pub fn spec_with_spacing(ifs: &Ifs, h: f64, eps_max: f64) -> Result<GridSpec> {
    if !(h > 0.0) || !(eps_max >= 0.0) {
        return invalid("grid spacing must be positive and eps_max non-negative");
    }
    let (lo, hi) = attractor_bbox(ifs);
    let pad = eps_max + 4.0 * h;
    let w = cells_spanning(hi[0] - lo[0] + 2.0 * pad, h);
    if ifs.ambient_dim() == 1 {
        return GridSpec::new([lo[0] - pad, -h / 2.0], h, w, 1);
    }
    let ht = cells_spanning(hi[1] - lo[1] + 2.0 * pad, h);
    GridSpec::new([lo[0] - pad, lo[1] - pad], h, w, ht)
}

/// Cells of width `h` covering `len`, ignoring rounding noise in the quotient.
fn cells_spanning(len: f64, h: f64) -> usize {
    (len / h * (1.0 - 1e-12)).ceil() as usize
}

/// Seeds: cells containing attractor samples at resolution `h/2`.
pub fn rasterize_attractor(ifs: &Ifs, spec: GridSpec) -> Result<BinaryGrid> {
    let cloud = ifs.attractor_cloud(spec.h / 2.0)?;
    Ok(BinaryGrid::from_points(spec, &cloud.points))
}
