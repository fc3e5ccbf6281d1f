use serde::{Deserialize, Serialize};

use super::moran::{eta, lattice_class, similarity_dimension, LatticeClass};
use super::similarity::Similarity;
use super::word::{Word, WordSet};
use crate::error::{invalid, Error, Result};
use crate::geometry::Region;
use crate::Point;

pub const DEFAULT_WORD_BUDGET: u64 = 10_000_000;
pub const DEFAULT_LATTICE_CAP: u64 = 1000;

/// A self-similar system together with its derived invariants.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Ifs {
    maps: Vec<Similarity>,
    ambient_dim: usize,
    open_set: Region,
    dimension: f64,
    eta: f64,
    diam: f64,
    reference_radius: f64,
    lattice: LatticeClass,
    word_budget: u64,
}

/// Point samples `S_ω(x₀)` for all words of one length.
#[derive(Debug, Clone)]
pub struct Cloud {
    pub depth: usize,
    /// Points in lexicographic word order.
    pub points: Vec<Point>,
}

impl Cloud {
    /// Word of the point with index `i`, truncated to its first `len` letters.
    pub fn prefix_of(&self, i: usize, n_maps: usize, len: usize) -> Word {
        let mut letters = vec![0; self.depth];
        let mut x = i;
        for slot in letters.iter_mut().rev() {
            *slot = x % n_maps;
            x /= n_maps;
        }
        letters.truncate(len);
        Word(letters)
    }
}

impl Ifs {
    pub fn new(ambient_dim: usize, maps: Vec<Similarity>, open_set: Region) -> Result<Self> {
        if !(1..=2).contains(&ambient_dim) {
            return invalid(format!("ambient dimension {ambient_dim} not supported"));
        }
        let ratios: Vec<f64> = maps.iter().map(|m| m.ratio).collect();
        let dimension = similarity_dimension(&ratios)?;
        let eta = eta(&ratios, dimension)?;
        let lattice = lattice_class(&ratios, DEFAULT_LATTICE_CAP)?;
        match (&open_set, ambient_dim) {
            (Region::Interval(a, b), 1) if a < b => {}
            (Region::Polygon(_), 2) => {}
            _ => return invalid("open set does not match the ambient dimension"),
        }
        let mut ifs = Ifs {
            maps,
            ambient_dim,
            open_set,
            dimension,
            eta,
            diam: 0.0,
            reference_radius: 0.0,
            lattice,
            word_budget: DEFAULT_WORD_BUDGET,
        };
        ifs.diam = ifs.certified_diameter();
        ifs.reference_radius = 1.5 * ifs.diam;
        ifs.check_open_set()?;
        Ok(ifs)
    }

    /// Overrides `R`; it must exceed `√2 · diam F`.
    pub fn with_reference_radius(mut self, r: f64) -> Result<Self> {
        let min = std::f64::consts::SQRT_2 * self.diam;
        if !(r > min) || !r.is_finite() {
            return Err(Error::OutOfRange {
                what: "R",
                value: r,
                range: format!("(sqrt(2)*diam F = {min}, inf)"),
            });
        }
        self.reference_radius = r;
        Ok(self)
    }

    pub fn with_word_budget(mut self, budget: u64) -> Self {
        self.word_budget = budget;
        self
    }

    pub fn with_lattice_cap(mut self, cap: u64) -> Result<Self> {
        self.lattice = lattice_class(&self.ratios(), cap)?;
        Ok(self)
    }

    pub fn maps(&self) -> &[Similarity] {
        &self.maps
    }
    pub fn len(&self) -> usize {
        self.maps.len()
    }
    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }
    pub fn open_set(&self) -> &Region {
        &self.open_set
    }
    pub fn dimension(&self) -> f64 {
        self.dimension
    }
    pub fn eta(&self) -> f64 {
        self.eta
    }
    pub fn diam(&self) -> f64 {
        self.diam
    }
    pub fn reference_radius(&self) -> f64 {
        self.reference_radius
    }
    pub fn lattice(&self) -> LatticeClass {
        self.lattice
    }
    pub fn word_budget(&self) -> u64 {
        self.word_budget
    }
    pub fn ratios(&self) -> Vec<f64> {
        self.maps.iter().map(|m| m.ratio).collect()
    }
    pub fn r_max(&self) -> f64 {
        self.maps.iter().map(|m| m.ratio).fold(0.0, f64::max)
    }
    pub fn r_min(&self) -> f64 {
        self.maps.iter().map(|m| m.ratio).fold(1.0, f64::min)
    }

    fn check_letters(&self, word: &Word) -> Result<()> {
        if let Some(l) = word.letters().iter().find(|&&l| l >= self.maps.len()) {
            return invalid(format!("letter {} out of range 1..={}", l + 1, self.maps.len()));
        }
        Ok(())
    }

    /// `S_ω = S_{ω1} ∘ … ∘ S_{ωn}`.
    pub fn word_map(&self, word: &Word) -> Result<Similarity> {
        self.check_letters(word)?;
        Ok(word
            .letters()
            .iter()
            .fold(Similarity::identity(), |acc, &l| acc.compose(&self.maps[l])))
    }

    /// `S_ω(point)` together with `r_ω`.
    pub fn apply_word(&self, word: &Word, point: Point) -> Result<(Point, f64)> {
        self.check_letters(word)?;
        let p = word.letters().iter().rev().fold(point, |p, &l| self.maps[l].apply(p));
        Ok((p, word.ratio(&self.ratios())))
    }

    /// `μ_F(S_ω F) = r_ω^D`.
    pub fn cylinder_measure(&self, word: &Word) -> Result<f64> {
        self.check_letters(word)?;
        Ok(word.ratio(&self.ratios()).powf(self.dimension))
    }

    /// Depth-first descent from the empty word, entering a node while
    /// `deeper(r_ω)` holds; leaves are returned in lexicographic order.
    pub fn descend(&self, deeper: impl Fn(f64) -> bool) -> Result<(Vec<Word>, Vec<f64>)> {
        let ratios = self.ratios();
        let n = ratios.len();
        let mut words = Vec::new();
        let mut rs = Vec::new();
        if !deeper(1.0) {
            return Ok((vec![Word::empty()], vec![1.0]));
        }
        let mut stack: Vec<(Vec<usize>, f64)> = (0..n).rev().map(|i| (vec![i], ratios[i])).collect();
        let mut visited: u64 = 0;
        while let Some((letters, r)) = stack.pop() {
            visited += 1;
            if visited > self.word_budget {
                return Err(Error::Budget {
                    budget: self.word_budget,
                    needed: visited,
                });
            }
            if deeper(r) {
                for i in (0..n).rev() {
                    let mut l = letters.clone();
                    l.push(i);
                    stack.push((l, r * ratios[i]));
                }
            } else {
                words.push(Word(letters));
                rs.push(r);
            }
        }
        Ok((words, rs))
    }

    /// `Σ(ε) = {ω : R r_ω < ε ≤ R r_{ω⁻}}`.
    pub fn stopping_set(&self, eps: f64) -> Result<WordSet> {
        self.stopping_set_with_radius(eps, self.reference_radius)
    }

    pub fn stopping_set_with_radius(&self, eps: f64, radius: f64) -> Result<WordSet> {
        if !(eps > 0.0 && eps <= radius) {
            return Err(Error::OutOfRange {
                what: "eps",
                value: eps,
                range: format!("(0, R = {radius}]"),
            });
        }
        let (words, ratios) = self.descend(|r| radius * r >= eps)?;
        Ok(WordSet { eps, words, ratios })
    }

    /// All `S_ω(x₀)` with `|ω| = depth`, `x₀` the fixed point of `S_1`.
    pub fn cloud_at_depth(&self, depth: usize) -> Result<Cloud> {
        let n = self.maps.len() as u64;
        let count = (n as f64).powi(depth as i32);
        if count > self.word_budget as f64 {
            return Err(Error::Budget {
                budget: self.word_budget,
                needed: count.min(u64::MAX as f64) as u64,
            });
        }
        let mut points = vec![self.maps[0].fixed_point()];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(points.len() * self.maps.len());
            for m in &self.maps {
                next.extend(points.iter().map(|&p| m.apply(p)));
            }
            points = next;
        }
        Ok(Cloud { depth, points })
    }

    /// Depth needed so that every attractor point lies within `resolution` of the cloud.
    pub fn cloud_depth(&self, resolution: f64) -> Result<usize> {
        if !(resolution > 0.0) {
            return Err(Error::OutOfRange {
                what: "resolution",
                value: resolution,
                range: "(0, inf)".into(),
            });
        }
        let r = self.r_max();
        let mut n = 0usize;
        let mut size = self.diam;
        while size > resolution / 2.0 {
            size *= r;
            n += 1;
        }
        Ok(n)
    }

    pub fn attractor_cloud(&self, resolution: f64) -> Result<Cloud> {
        self.cloud_at_depth(self.cloud_depth(resolution)?)
    }

    /// Convex hull vertices of the attractor to about machine precision.
    pub fn hull(&self) -> Vec<Point> {
        let mut hull = vec![self.maps[0].fixed_point()];
        let mut prev = Vec::new();
        for _ in 0..400 {
            let pts: Vec<Point> = self
                .maps
                .iter()
                .flat_map(|m| hull.iter().map(move |&p| m.apply(p)))
                .chain(hull.iter().copied())
                .collect();
            hull = convex_hull(pts);
            if hull == prev {
                break;
            }
            prev = hull.clone();
        }
        hull
    }

    /// Upper bound on `diam F`: hull diameter of the depth-n cloud plus `2 r_max^n B`,
    /// iterated until the slack is below `1e-9` of the estimate.
    fn certified_diameter(&self) -> f64 {
        let c = self.maps[0].fixed_point();
        let radius = self
            .maps
            .iter()
            .map(|m| dist(m.apply(c), c) / (1.0 - m.ratio))
            .fold(0.0, f64::max);
        let bound = 2.0 * radius;
        let r = self.r_max();
        let mut hull = vec![c];
        let mut slack = bound;
        for _ in 0..2000 {
            let d = diameter(&hull);
            if slack <= 1e-9 * d.max(f64::MIN_POSITIVE) {
                return d + slack;
            }
            let pts: Vec<Point> = self
                .maps
                .iter()
                .flat_map(|m| hull.iter().map(move |&p| m.apply(p)))
                .collect();
            hull = convex_hull(pts);
            slack *= r;
        }
        diameter(&hull) + slack
    }

    fn check_open_set(&self) -> Result<()> {
        let images: Vec<Region> = self.maps.iter().map(|m| self.open_set.map(m)).collect();
        for (i, img) in images.iter().enumerate() {
            let outside = img
                .sample_points()
                .into_iter()
                .any(|p| self.open_set.signed_distance(p) > 1e-9 * self.diam.max(1.0));
            if outside {
                return invalid(format!("S_{}(O) is not contained in O", i + 1));
            }
            for (j, other) in images.iter().enumerate().skip(i + 1) {
                if img.overlaps(other) {
                    return invalid(format!("S_{}(O) and S_{}(O) overlap", i + 1, j + 1));
                }
            }
        }
        let mut depth = 0;
        while (self.maps.len() as f64).powi(depth as i32 + 1) <= 4096.0 {
            depth += 1;
        }
        let cloud = self.cloud_at_depth(depth)?;
        if !cloud.points.iter().any(|&p| self.open_set.contains(p)) {
            return invalid("no attractor sample lies inside the open set (O ∩ F = ∅)");
        }
        Ok(())
    }
}

fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn diameter(pts: &[Point]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            d = d.max(dist(*a, *b));
        }
    }
    d
}

/// Andrew's monotone chain; collinear points are dropped.
pub(crate) fn convex_hull(mut pts: Vec<Point>) -> Vec<Point> {
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let cross = |o: Point, a: Point, b: Point| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}
