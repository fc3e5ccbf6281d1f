#![allow(dead_code)]

use std::collections::VecDeque;

use fraccurv_core::functionals::{FunctionalVector, GridEvaluator};
use fraccurv_core::geometry::{
    distance_transform, rasterize_attractor, scene_grid, BinaryGrid, GridSpec, Polygon, Region,
};
use fraccurv_core::ifs::{Ifs, Similarity};
use rand::Rng;

pub fn random_grid(rng: &mut impl Rng, width: usize, height: usize, density: f64) -> BinaryGrid {
    let spec = GridSpec::new([0.0, 0.0], 1.0, width, height).unwrap();
    let cells = (0..width * height).map(|_| rng.gen_bool(density)).collect();
    BinaryGrid::from_cells(spec, cells).unwrap()
}

/// Squared distance (in cells) from every cell centre to the nearest seed, by exhaustion.
pub fn brute_force_edt(seeds: &BinaryGrid) -> Vec<u32> {
    let (w, h) = (seeds.spec.width, seeds.spec.height);
    let pts: Vec<(i64, i64)> = (0..h)
        .flat_map(|j| (0..w).map(move |i| (i, j)))
        .filter(|&(i, j)| seeds.get(i, j))
        .map(|(i, j)| (i as i64, j as i64))
        .collect();
    let mut out = Vec::with_capacity(w * h);
    for j in 0..h as i64 {
        for i in 0..w as i64 {
            let d = pts.iter().map(|&(a, b)| (a - i).pow(2) + (b - j).pow(2)).min().unwrap();
            out.push(d as u32);
        }
    }
    out
}

/// Components (8-adjacent) minus holes (bounded 4-adjacent background components).
pub fn components_minus_holes(grid: &BinaryGrid) -> i64 {
    let (w, h) = (grid.spec.width as i64 + 2, grid.spec.height as i64 + 2);
    let at = |i: i64, j: i64| -> bool {
        i >= 1 && j >= 1 && i <= w - 2 && j <= h - 2 && grid.get((i - 1) as usize, (j - 1) as usize)
    };
    let count = |fg: bool, nbrs: &[(i64, i64)]| -> i64 {
        let mut seen = vec![false; (w * h) as usize];
        let mut n = 0;
        for j in 0..h {
            for i in 0..w {
                if at(i, j) != fg || seen[(j * w + i) as usize] {
                    continue;
                }
                n += 1;
                seen[(j * w + i) as usize] = true;
                let mut queue = VecDeque::from([(i, j)]);
                while let Some((a, b)) = queue.pop_front() {
                    for &(da, db) in nbrs {
                        let (x, y) = (a + da, b + db);
                        if x < 0 || y < 0 || x >= w || y >= h || at(x, y) != fg || seen[(y * w + x) as usize] {
                            continue;
                        }
                        seen[(y * w + x) as usize] = true;
                        queue.push_back((x, y));
                    }
                }
            }
        }
        n
    };
    let four = [(1, 0), (-1, 0), (0, 1), (0, -1)];
    let eight = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)];
    // the padded frame is one unbounded background component
    count(true, &eight) - (count(false, &four) - 1)
}

/// Functionals of `F_eps` on the standard scene grid with `cells` cells.
pub fn scene_functionals(ifs: &Ifs, cells: usize, eps: f64) -> (FunctionalVector, f64) {
    let spec = scene_grid(ifs, cells, eps).unwrap();
    let dg = distance_transform(&rasterize_attractor(ifs, spec).unwrap()).unwrap();
    let ev = GridEvaluator::new(&dg).evaluate(eps, None).unwrap();
    (ev.functionals, spec.h)
}

fn rotate(p: [f64; 2], angle: f64) -> [f64; 2] {
    let (s, c) = angle.sin_cos();
    [c * p[0] - s * p[1], s * p[0] + c * p[1]]
}

/// Image of a planar system without reflections under `x ↦ λ Q_angle x`.
pub fn transformed(ifs: &Ifs, rotation_vertices: &[[f64; 2]], lambda: f64, angle: f64) -> Ifs {
    let maps = ifs
        .maps()
        .iter()
        .map(|m| {
            let t = rotate([lambda * m.translation[0], lambda * m.translation[1]], angle);
            Similarity::planar(m.ratio, m.rotation, false, t).unwrap()
        })
        .collect();
    let verts = rotation_vertices
        .iter()
        .map(|&v| rotate([lambda * v[0], lambda * v[1]], angle))
        .collect();
    Ifs::new(2, maps, Region::Polygon(Polygon::new(verts).unwrap())).unwrap()
}
