//! Sampled curves `ε ↦ C_k(F_ε)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::epsgrid::EpsGrid;
use super::exact::{exact_parallel_set, ExactLine};
use crate::error::{invalid, Error, Result};
use crate::functionals::{interval_localized, FunctionalVector, GridEvaluator, RegionPartition};
use crate::geometry::{distance_transform, rasterize_attractor, scene_grid, Region};
use crate::ifs::{Ifs, LatticeClass, Word};

/// How parallel sets are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Engine {
    /// Closed-form gap spectrum (systems on the line).
    #[serde(rename = "exact-1d")]
    Exact1d,
    /// Distance grid with `cells` cells along the longer side of the scene.
    Grid { cells: usize },
}

/// Parameters of a curve sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveOptions {
    pub eps_max: f64,
    pub eps_min: f64,
    pub samples_per_decade: usize,
    pub engine: Engine,
    /// Also record localized values on the level-`m` cylinder cells.
    pub localize_level: Option<usize>,
}

/// Evaluation metadata.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EngineInfo {
    #[serde(rename = "exact-1d")]
    Exact1d,
    Grid {
        h: f64,
        width: usize,
        height: usize,
    },
}

/// Functionals at one scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub eps: f64,
    pub functionals: FunctionalVector,
    /// Jordan-decomposition proxy of the total variation of `C_0(F_ε, ·)`.
    pub euler_variation: f64,
}

/// Localized values on a fixed cell family, one row per sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSeries {
    pub level: usize,
    /// Cylinder word of each cell; `None` marks the complement cell.
    pub words: Vec<Option<Word>>,
    /// `values[sample][k][cell]`.
    pub values: Vec<Vec<Vec<f64>>>,
}

/// `ε ↦ (C_0, C_{d-1}, C_d)(F_ε)` on a geometric grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureCurve {
    pub ambient_dim: usize,
    pub dimension: f64,
    /// Diameter of the attractor.
    pub diam: f64,
    pub eta: f64,
    pub reference_radius: f64,
    pub ratios: Vec<f64>,
    pub lattice: LatticeClass,
    pub engine: EngineInfo,
    pub grid: EpsGrid,
    pub samples: Vec<CurveSample>,
    pub cells: Option<CellSeries>,
    /// Gap spectrum of exact curves.
    pub exact: Option<ExactLine>,
}

/// Rescaled curve `ε ↦ ε^{D-k} C_k(F_ε)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RescaledCurve {
    pub k: usize,
    pub points: Vec<(f64, f64)>,
    /// All values vanish: the exponent `D − k` is not informative.
    pub near_zero: bool,
}

/// Sweeps `F_ε` over the ε-grid of `opts`.
pub fn curvature_curve(ifs: &Ifs, opts: &CurveOptions) -> Result<CurvatureCurve> {
    let grid = match ifs.lattice().generator() {
        Some(p) => EpsGrid::aligned(opts.eps_max, opts.eps_min, opts.samples_per_decade, p)?,
        None => EpsGrid::midpoint(opts.eps_max, opts.eps_min, opts.samples_per_decade)?,
    };
    let eps = grid.values();
    let d = ifs.ambient_dim();
    let cells = match opts.localize_level {
        Some(m) => Some(cylinder_cells(ifs, m)?),
        None => None,
    };

    let (engine, samples, values, exact) = match opts.engine {
        Engine::Exact1d => {
            let exact = ExactLine::new(ifs, grid.lower_edge() * (1.0 - 1e-9))?;
            let samples: Vec<CurveSample> = eps
                .iter()
                .map(|&e| {
                    let f = exact.functionals(e);
                    CurveSample {
                        eps: e,
                        functionals: f,
                        euler_variation: f.chi as f64,
                    }
                })
                .collect();
            let values = match &cells {
                Some((_, part)) => Some(
                    eps.par_iter()
                        .map(|&e| {
                            let loc = interval_localized(&exact_parallel_set(ifs, e)?, part)?;
                            Ok((0..=1).map(|k| loc.by_k(k).values()).collect())
                        })
                        .collect::<Result<Vec<Vec<Vec<f64>>>>>()?,
                ),
                None => None,
            };
            (EngineInfo::Exact1d, samples, values, Some(exact))
        }
        Engine::Grid { cells: n } => {
            let spec = scene_grid(ifs, n, opts.eps_max)?;
            if opts.eps_min < 4.0 * spec.h {
                return Err(Error::Resolution {
                    eps: opts.eps_min,
                    min: 4.0 * spec.h,
                    h: spec.h,
                });
            }
            let seeds = rasterize_attractor(ifs, spec)?;
            let dg = distance_transform(&seeds)?;
            let evaluator = match &cells {
                Some((_, part)) => GridEvaluator::with_partition(&dg, part)?,
                None => GridEvaluator::new(&dg),
            };
            let out = eps
                .par_iter()
                .map(|&e| evaluator.evaluate(e, Some(proxy_block(e, spec.h))))
                .collect::<Result<Vec<_>>>()?;
            let samples = out
                .iter()
                .map(|ev| CurveSample {
                    eps: ev.eps,
                    functionals: ev.functionals,
                    euler_variation: ev.euler_variation_proxy.unwrap_or(f64::NAN),
                })
                .collect();
            let values = cells.as_ref().map(|_| {
                out.iter()
                    .map(|ev| {
                        let loc = ev.localized.as_ref().expect("partition was supplied");
                        (0..=d).map(|k| loc.by_k(k).values()).collect()
                    })
                    .collect()
            });
            let info = EngineInfo::Grid {
                h: spec.h,
                width: spec.width,
                height: spec.height,
            };
            (info, samples, values, None)
        }
    };

    let curve = CurvatureCurve {
        ambient_dim: d,
        dimension: ifs.dimension(),
        diam: ifs.diam(),
        eta: ifs.eta(),
        reference_radius: ifs.reference_radius(),
        ratios: ifs.ratios(),
        lattice: ifs.lattice(),
        engine,
        grid,
        samples,
        cells: cells.map(|(words, _)| CellSeries {
            level: opts.localize_level.unwrap_or(0),
            words,
            values: values.unwrap_or_default(),
        }),
        exact,
    };
    curve.check_monotone()?;
    Ok(curve)
}

/// Block side (in cells) of the Euler variation proxy: about `2ε`.
pub fn proxy_block(eps: f64, h: f64) -> usize {
    ((2.0 * eps / h).round() as usize).max(2)
}

/// Cells `S_ω O`, `|ω| = m`, followed by the complement of their union.
pub(crate) fn cylinder_cells(ifs: &Ifs, m: usize) -> Result<(Vec<Option<Word>>, RegionPartition)> {
    let n = ifs.len();
    let count = n.checked_pow(m as u32).filter(|&c| c < u16::MAX as usize - 1);
    let Some(count) = count else {
        return invalid(format!("level {m} has too many cylinder cells"));
    };
    let mut words = Vec::with_capacity(count + 1);
    let mut regions: Vec<Region> = Vec::with_capacity(count);
    for idx in 0..count {
        let mut letters = vec![0; m];
        let mut x = idx;
        for slot in letters.iter_mut().rev() {
            *slot = x % n;
            x /= n;
        }
        let w = Word(letters);
        regions.push(ifs.open_set().map(&ifs.word_map(&w)?));
        words.push(Some(w));
    }
    words.push(None);
    Ok((words, RegionPartition::new(regions)?))
}

impl CurvatureCurve {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn eps(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.eps).collect()
    }

    /// `C_k(F_ε)` per sample.
    pub fn values(&self, k: usize) -> Vec<f64> {
        self.samples
            .iter()
            .map(|s| s.functionals.get(k, self.ambient_dim))
            .collect()
    }

    /// `ε^{D-k} C_k(F_ε)` per sample.
    pub fn rescaled_values(&self, k: usize) -> Vec<f64> {
        self.samples
            .iter()
            .map(|s| s.eps.powf(self.dimension - k as f64) * s.functionals.get(k, self.ambient_dim))
            .collect()
    }

    /// Total variation of `C_k(F_ε, ·)` per sample (a proxy for `k = 0` in the plane).
    pub fn variation(&self, k: usize) -> Vec<f64> {
        if k == 0 {
            self.samples.iter().map(|s| s.euler_variation).collect()
        } else {
            self.values(k)
        }
    }

    /// `C_k(F_ε)` at any `ε` in the sampled range: exact when available,
    /// otherwise linear interpolation in `ln ε`.
    pub fn value_at(&self, k: usize, eps: f64) -> Result<f64> {
        if let Some(ex) = &self.exact {
            if eps >= ex.floor() {
                let (a, b) = ex.affine(k, eps);
                return Ok(a + b * eps);
            }
        }
        let n = self.samples.len();
        let (top, bottom) = (self.samples[0].eps, self.samples[n - 1].eps);
        let tol = 1e-9;
        if eps > top * (1.0 + tol) || eps < bottom * (1.0 - tol) {
            // midpoint grids extend half a cell beyond the extreme samples
            let (hi_edge, lo_edge) = (self.grid.eps_max, self.grid.lower_edge());
            if eps <= hi_edge * (1.0 + tol) && eps >= top {
                return Ok(self.samples[0].functionals.get(k, self.ambient_dim));
            }
            if eps >= lo_edge * (1.0 - tol) && eps <= bottom {
                return Ok(self.samples[n - 1].functionals.get(k, self.ambient_dim));
            }
            return Err(Error::OutOfRange {
                what: "eps",
                value: eps,
                range: format!("[{lo_edge}, {hi_edge}] covered by the curve"),
            });
        }
        let u = eps.ln();
        let j = self.samples.partition_point(|s| s.eps > eps).clamp(1, n - 1);
        let (a, b) = (&self.samples[j - 1], &self.samples[j]);
        let t = (a.eps.ln() - u) / (a.eps.ln() - b.eps.ln());
        let (fa, fb) = (
            a.functionals.get(k, self.ambient_dim),
            b.functionals.get(k, self.ambient_dim),
        );
        Ok(fa + t.clamp(0.0, 1.0) * (fb - fa))
    }

    fn check_monotone(&self) -> Result<()> {
        let vol = self.values(self.ambient_dim);
        // samples are in decreasing ε; volume must not increase along the list
        if vol.windows(2).any(|w| w[1] > w[0] * (1.0 + 1e-12)) {
            return invalid("volume is not monotone along the curve");
        }
        Ok(())
    }
}

/// Pointwise `ε^{D-k} C_k(F_ε)`.
pub fn rescale(curve: &CurvatureCurve, k: usize) -> RescaledCurve {
    let vals = curve.rescaled_values(k);
    let near_zero = vals.iter().all(|v| v.abs() < 1e-12);
    RescaledCurve {
        k,
        points: curve.eps().into_iter().zip(vals).collect(),
        near_zero,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::catalog::{cantor, sierpinski_gasket};

    #[test]
    fn exact_cantor_curve() {
        let c = cantor();
        let opts = CurveOptions {
            eps_max: 1.5,
            eps_min: 1e-4,
            samples_per_decade: 32,
            engine: Engine::Exact1d,
            localize_level: None,
        };
        let curve = curvature_curve(&c, &opts).unwrap();
        assert!(curve.grid.per_period.is_some());
        let e = curve.eps();
        assert!(e.windows(2).all(|w| w[0] > w[1]));
        assert!((curve.value_at(1, 0.1).unwrap() - 16.0 / 15.0).abs() < 1e-14);
        let r = rescale(&curve, 1);
        assert!(!r.near_zero);
        let d = c.dimension();
        let expected = 0.1f64.powf(d - 1.0) * 16.0 / 15.0;
        assert!((expected - 2.49516).abs() < 1e-5);
        assert!((r.points.iter().find(|p| p.0 < 0.1).unwrap().1 - 2.4951).abs() < 0.05);
    }

    #[test]
    fn grid_curve_is_monotone_and_resolved() {
        let g = sierpinski_gasket();
        let opts = CurveOptions {
            eps_max: 0.5,
            eps_min: 0.02,
            samples_per_decade: 8,
            engine: Engine::Grid { cells: 512 },
            localize_level: Some(1),
        };
        let curve = curvature_curve(&g, &opts).unwrap();
        let cells = curve.cells.as_ref().unwrap();
        assert_eq!(cells.words.len(), 4);
        for (s, row) in curve.samples.iter().zip(&cells.values) {
            let total: f64 = row[2].iter().sum();
            assert!((total - s.functionals.volume).abs() < 1e-12);
        }
        let bad = CurveOptions { eps_min: 1e-4, ..opts };
        assert!(matches!(curvature_curve(&g, &bad), Err(Error::Resolution { .. })));
    }

    #[test]
    fn rescale_of_zero_is_zero() {
        let c = cantor();
        let opts = CurveOptions {
            eps_max: 1.0,
            eps_min: 0.1,
            samples_per_decade: 8,
            engine: Engine::Exact1d,
            localize_level: None,
        };
        let mut curve = curvature_curve(&c, &opts).unwrap();
        for s in &mut curve.samples {
            s.functionals.chi = 0;
        }
        curve.exact = None;
        assert!(rescale(&curve, 0).near_zero);
    }
}
