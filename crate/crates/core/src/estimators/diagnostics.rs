//! Boundary words, overlap masses and counting diagnostics.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::curve::proxy_block;
use crate::error::{Error, Result};
use crate::functionals::{CellPartition, GridEvaluator, RegionPartition};
use crate::geometry::{distance_transform, open_set_union, rasterize_attractor, scene_grid, Region};
use crate::ifs::{Ifs, Word, WordSet};
use crate::Point;

/// Resolution of the cylinder samples, relative to the cylinder diameter.
const CYLINDER_CLOUD: f64 = 1.0 / 16.0;

/// Attractor sample used to represent each cylinder `S_ω F`.
fn base_cloud(ifs: &Ifs, relative: f64) -> Result<Vec<Point>> {
    Ok(ifs.attractor_cloud(relative * ifs.diam())?.points)
}

/// Distance from `p` to the complement of the union of the (disjoint, open) regions.
fn depth_in(part: &RegionPartition, p: Point) -> f64 {
    match part.locate(p) {
        Some(c) if c < part.complement() => (-part.regions()[c].signed_distance(p)).max(0.0),
        _ => 0.0,
    }
}

/// `min_{x ∈ S_ω(cloud)} dist(x, (⋃ regions)^c)`.
fn cylinder_depth(ifs: &Ifs, word: &Word, cloud: &[Point], part: &RegionPartition) -> Result<f64> {
    let m = ifs.word_map(word)?;
    let mut best = f64::INFINITY;
    for &p in cloud {
        best = best.min(depth_in(part, m.apply(p)));
        if best == 0.0 {
            break;
        }
    }
    Ok(best)
}

fn first_level(ifs: &Ifs) -> Result<RegionPartition> {
    let regions: Vec<Region> = ifs.maps().iter().map(|m| ifs.open_set().map(m)).collect();
    RegionPartition::new(regions)
}

/// `Σ_b(ε) = {ω ∈ Σ(ε) : dist(S_ω F, (⋃ S_i O)^c) ≤ 2ε}`.
pub fn sigma_b(ifs: &Ifs, eps: f64) -> Result<WordSet> {
    let all = ifs.stopping_set(eps)?;
    let part = first_level(ifs)?;
    let cloud = base_cloud(ifs, CYLINDER_CLOUD)?;
    let mut words = Vec::new();
    let mut ratios = Vec::new();
    for (w, r) in all.iter() {
        if cylinder_depth(ifs, w, &cloud, &part)? <= 2.0 * eps {
            words.push(w.clone());
            ratios.push(r);
        }
    }
    Ok(WordSet { eps, words, ratios })
}

/// Overlap diagnostic for the uniform bound of the localized curvature near
/// neighbouring cylinders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ConditionIiReport {
    /// The bound is only required for `k ≤ d − 2`.
    NotApplicable { k: usize, ambient_dim: usize },
    Evaluated {
        k: usize,
        /// `(ε, max_{σ ∈ Σ_b(ε)} mass(Z_σ) / ε^k)` per sampled scale.
        ratios: Vec<(f64, f64)>,
        sup: f64,
        /// Slope of `ln ratio` against `ln(1/ε)` (positive ratios only).
        slope: f64,
    },
}

/// For each `ε`, the variation-proxy mass of `C_k(F_ε, ·)` on
/// `Z_σ = (S_σF)_ε ∩ ⋃_{ω ∈ Σ(ε)∖{σ}} (S_ωF)_ε`, maximised over `σ ∈ Σ_b(ε)`.
pub fn condition_ii_diagnostic(ifs: &Ifs, k: usize, cells: usize, eps_values: &[f64]) -> Result<ConditionIiReport> {
    let d = ifs.ambient_dim();
    if k + 2 > d {
        return Ok(ConditionIiReport::NotApplicable { k, ambient_dim: d });
    }
    let eps_max = eps_values.iter().copied().fold(0.0, f64::max);
    let spec = scene_grid(ifs, cells, eps_max)?;
    let dg = distance_transform(&rasterize_attractor(ifs, spec)?)?;
    let evaluator = GridEvaluator::new(&dg);
    let mut ratios = Vec::new();
    for &eps in eps_values {
        // validates resolution and margin
        evaluator.evaluate(eps, None)?;
        let boundary = sigma_b(ifs, eps)?;
        let stop = ifs.stopping_set(eps)?;
        let index: HashMap<&Word, u32> = stop.words.iter().enumerate().map(|(i, w)| (w, i as u32)).collect();
        let in_b: Vec<bool> = {
            let b: std::collections::HashSet<&Word> = boundary.words.iter().collect();
            stop.words.iter().map(|w| b.contains(w)).collect()
        };
        // labelled sample of F at resolution ≈ ε/8
        let res = (eps / 8.0).max(spec.h);
        let depth = ifs.cloud_depth(res)?;
        let cloud = ifs.cloud_at_depth(depth)?;
        let n = ifs.len();
        let tol = eps + spec.h + res;
        let mut hash: HashMap<(i64, i64), Vec<(Point, u32)>> = HashMap::new();
        let key = |p: Point| ((p[0] / tol).floor() as i64, (p[1] / tol).floor() as i64);
        // the stopping word of a cloud point is its unique prefix in Σ(ε)
        let max_len = stop.words.iter().map(|w| w.len()).max().unwrap_or(0).min(depth);
        for (i, &p) in cloud.points.iter().enumerate() {
            let full = cloud.prefix_of(i, n, max_len);
            let mut label = None;
            for l in 0..=full.len() {
                let w = Word(full.0[..l].to_vec());
                if let Some(&id) = index.get(&w) {
                    label = Some(id);
                    break;
                }
            }
            if let Some(id) = label {
                hash.entry(key(p)).or_default().push((p, id));
            }
        }
        let block = proxy_block(eps, spec.h);
        let mut mass: HashMap<(u32, usize, usize), i64> = HashMap::new();
        for v in evaluator.euler_vertices(eps) {
            let x = spec.corner(v.i, v.j);
            let (kx, ky) = key(x);
            let mut near: Vec<u32> = Vec::new();
            for dy in -1..=1 {
                for dx in -1..=1 {
                    if let Some(list) = hash.get(&(kx + dx, ky + dy)) {
                        for &(p, id) in list {
                            if (p[0] - x[0]).hypot(p[1] - x[1]) <= tol && !near.contains(&id) {
                                near.push(id);
                            }
                        }
                    }
                }
            }
            if near.len() < 2 {
                continue;
            }
            for &id in &near {
                if in_b[id as usize] {
                    *mass.entry((id, v.i / block, v.j / block)).or_default() += v.quarters as i64;
                }
            }
        }
        let mut per_word: HashMap<u32, i64> = HashMap::new();
        for ((id, _, _), q) in mass {
            *per_word.entry(id).or_default() += q.abs();
        }
        let worst = per_word.values().copied().max().unwrap_or(0) as f64 / 4.0;
        ratios.push((eps, worst / eps.powi(k as i32)));
    }
    let sup = ratios.iter().map(|r| r.1).fold(0.0, f64::max);
    let pos: Vec<(f64, f64)> = ratios.iter().copied().filter(|r| r.1 > 0.0).collect();
    let slope = if pos.len() >= 2 {
        let xs: Vec<f64> = pos.iter().map(|r| (1.0 / r.0).ln()).collect();
        let ys: Vec<f64> = pos.iter().map(|r| r.1.ln()).collect();
        super::linear_fit(&xs, &ys).0
    } else {
        0.0
    };
    Ok(ConditionIiReport::Evaluated { k, ratios, sup, slope })
}

/// Closed set whose δ-neighbourhood is probed by the counting diagnostic.
#[derive(Debug, Clone)]
pub enum OmegaTarget {
    /// The whole space.
    Whole,
    /// `O(r)^c`, the complement of `⋃_{σ ∈ Σ(r)} S_σ O`.
    ComplementOf(f64),
}

/// Distances `dist(S_ω F, O(r)^c)` for all `ω ∈ Σ(ε)` (`0` for the whole space).
fn omega_depths(ifs: &Ifs, target: &OmegaTarget, eps: f64) -> Result<Vec<f64>> {
    let words = ifs.stopping_set(eps)?;
    match target {
        OmegaTarget::Whole => Ok(vec![0.0; words.len()]),
        OmegaTarget::ComplementOf(r) => {
            let pieces = open_set_union(ifs, *r)?;
            let part = RegionPartition::new(pieces.into_iter().map(|(_, reg)| reg).collect())?;
            let cloud = base_cloud(ifs, CYLINDER_CLOUD)?;
            words
                .words
                .iter()
                .map(|w| cylinder_depth(ifs, w, &cloud, &part))
                .collect()
        }
    }
}

/// `#Ω(B_δ, ε)`: stopping words `ω ∈ Σ(ε)` with `(S_ω F)_ε ∩ B_δ ≠ ∅`.
pub fn omega_count(ifs: &Ifs, target: &OmegaTarget, delta: f64, eps: f64) -> Result<usize> {
    Ok(omega_depths(ifs, target, eps)?
        .iter()
        .filter(|&&d| d <= eps + delta)
        .count())
}

/// Counts over a `δ`-grid at fixed `ε` and the fitted exponent of
/// `#Ω · ε^D ≈ c δ^γ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaReport {
    pub r: f64,
    /// `(δ, ε, #Ω, #Ω·ε^D)`.
    pub rows: Vec<(f64, f64, usize, f64)>,
    pub gamma: f64,
}

pub fn omega_scaling_diagnostic(ifs: &Ifs, r: f64, deltas: &[f64], eps: f64) -> Result<OmegaReport> {
    if deltas.iter().any(|&d| d < eps) {
        return Err(Error::InvalidInput("every delta must be at least eps".into()));
    }
    let depths = omega_depths(ifs, &OmegaTarget::ComplementOf(r), eps)?;
    let d = ifs.dimension();
    let rows: Vec<(f64, f64, usize, f64)> = deltas
        .iter()
        .map(|&delta| {
            let c = depths.iter().filter(|&&x| x <= eps + delta).count();
            (delta, eps, c, c as f64 * eps.powf(d))
        })
        .collect();
    let pos: Vec<&(f64, f64, usize, f64)> = rows.iter().filter(|r| r.2 > 0).collect();
    let gamma = if pos.len() >= 2 {
        let xs: Vec<f64> = pos.iter().map(|r| r.0.ln()).collect();
        let ys: Vec<f64> = pos.iter().map(|r| r.3.ln()).collect();
        super::linear_fit(&xs, &ys).0
    } else {
        0.0
    };
    Ok(OmegaReport { r, rows, gamma })
}
