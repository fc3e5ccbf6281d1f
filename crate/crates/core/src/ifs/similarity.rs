use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::Point;

/// A contracting similarity `x -> ratio * Q x + t` with `Q` orthogonal.
///
/// One-dimensional maps live on the x-axis of the plane; for them `rotation`
/// is ignored and `reflect` flips the orientation of the line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Similarity {
    pub ratio: f64,
    /// Rotation angle in radians (planar maps only).
    pub rotation: f64,
    pub reflect: bool,
    pub translation: Point,
    linear: [[f64; 2]; 2],
}

impl Similarity {
    pub fn planar(ratio: f64, rotation: f64, reflect: bool, translation: Point) -> Result<Self> {
        check_ratio(ratio)?;
        let (s, c) = rotation.sin_cos();
        // rotation after the optional reflection across the x-axis
        let f = if reflect { -1.0 } else { 1.0 };
        let linear = [[ratio * c, -ratio * s * f], [ratio * s, ratio * c * f]];
        Ok(Self {
            ratio,
            rotation,
            reflect,
            translation,
            linear,
        })
    }

    pub fn linear(ratio: f64, reflect: bool, translation: f64) -> Result<Self> {
        check_ratio(ratio)?;
        let f = if reflect { -1.0 } else { 1.0 };
        Ok(Self {
            ratio,
            rotation: 0.0,
            reflect,
            translation: [translation, 0.0],
            linear: [[ratio * f, 0.0], [0.0, ratio]],
        })
    }

    #[inline]
    pub fn apply(&self, p: Point) -> Point {
        let m = &self.linear;
        [
            m[0][0] * p[0] + m[0][1] * p[1] + self.translation[0],
            m[1][0] * p[0] + m[1][1] * p[1] + self.translation[1],
        ]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Similarity) -> Similarity {
        let a = &self.linear;
        let b = &other.linear;
        let mut linear = [[0.0; 2]; 2];
        for (i, row) in linear.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        let t = self.apply(other.translation);
        Similarity {
            ratio: self.ratio * other.ratio,
            rotation: self.rotation + if self.reflect { -other.rotation } else { other.rotation },
            reflect: self.reflect != other.reflect,
            translation: t,
            linear,
        }
    }

    pub fn identity() -> Similarity {
        Similarity {
            ratio: 1.0,
            rotation: 0.0,
            reflect: false,
            translation: [0.0, 0.0],
            linear: [[1.0, 0.0], [0.0, 1.0]],
        }
    }

    /// Whether the map reverses orientation.
    pub fn reverses_orientation(&self) -> bool {
        let m = &self.linear;
        m[0][0] * m[1][1] - m[0][1] * m[1][0] < 0.0
    }

    /// Unique fixed point, solving `(I - A) x = t`.
    pub fn fixed_point(&self) -> Point {
        let m = &self.linear;
        let (a, b, c, d) = (1.0 - m[0][0], -m[0][1], -m[1][0], 1.0 - m[1][1]);
        let det = a * d - b * c;
        let [tx, ty] = self.translation;
        [(d * tx - b * ty) / det, (a * ty - c * tx) / det]
    }
}

fn check_ratio(ratio: f64) -> Result<()> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return invalid(format!("contraction ratio {ratio} is not in (0,1)"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn dist(a: Point, b: Point) -> f64 {
        (a[0] - b[0]).hypot(a[1] - b[1])
    }

    #[test]
    fn distances_scale_by_ratio() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let s = Similarity::planar(
                rng.gen_range(0.01..0.99),
                rng.gen_range(-3.0..3.0),
                rng.gen(),
                [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)],
            )
            .unwrap();
            let x = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let y = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let lhs = dist(s.apply(x), s.apply(y));
            assert!((lhs - s.ratio * dist(x, y)).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_ratio() {
        assert!(Similarity::linear(1.2, false, 0.0).is_err());
        assert!(Similarity::linear(0.0, false, 0.0).is_err());
        assert!(Similarity::planar(f64::NAN, 0.0, false, [0.0, 0.0]).is_err());
    }

    #[test]
    fn composition_applies_right_map_first() {
        let a = Similarity::planar(0.5, 0.3, true, [1.0, 2.0]).unwrap();
        let b = Similarity::planar(0.25, -1.1, false, [-0.5, 0.1]).unwrap();
        let p = [0.7, -0.2];
        let q = a.compose(&b).apply(p);
        let r = a.apply(b.apply(p));
        assert!(dist(q, r) < 1e-14);
        assert!(a.compose(&b).reverses_orientation());
    }

    #[test]
    fn fixed_point_is_fixed() {
        let s = Similarity::planar(0.4, 1.0, true, [0.3, -0.8]).unwrap();
        let x = s.fixed_point();
        assert!(dist(s.apply(x), x) < 1e-14);
    }
}
