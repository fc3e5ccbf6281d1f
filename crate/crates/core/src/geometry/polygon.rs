//! Simple polygons and closed intervals used as open-set witnesses.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::ifs::Similarity;
use crate::Point;

/// A simple polygon, stored counterclockwise, standing for its open interior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    pub fn new(mut vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return invalid("polygon needs at least three vertices");
        }
        if signed_area(&vertices) < 0.0 {
            vertices.reverse();
        }
        let p = Polygon { vertices };
        if p.area() <= 0.0 {
            return invalid("degenerate polygon");
        }
        if !p.is_simple() {
            return invalid("self-intersecting polygon");
        }
        Ok(p)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn bbox(&self) -> (Point, Point) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for v in &self.vertices {
            for a in 0..2 {
                lo[a] = lo[a].min(v[a]);
                hi[a] = hi[a].max(v[a]);
            }
        }
        (lo, hi)
    }

    /// Image under a similarity; orientation is restored to counterclockwise.
    pub fn map(&self, s: &Similarity) -> Polygon {
        let mut vertices: Vec<Point> = self.vertices.iter().map(|&v| s.apply(v)).collect();
        if s.reverses_orientation() {
            vertices.reverse();
        }
        Polygon { vertices }
    }

    /// Strict interior test by crossing number (boundary points are outside).
    pub fn contains(&self, p: Point) -> bool {
        let mut inside = false;
        for (a, b) in self.edges() {
            if point_segment_distance(p, a, b) == 0.0 {
                return false;
            }
            if (a[1] > p[1]) != (b[1] > p[1]) {
                let x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
                if p[0] < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    pub fn boundary_distance(&self, p: Point) -> f64 {
        self.edges()
            .map(|(a, b)| point_segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Negative inside, positive outside, magnitude = distance to the boundary.
    pub fn signed_distance(&self, p: Point) -> f64 {
        let d = self.boundary_distance(p);
        if self.contains(p) {
            -d
        } else {
            d
        }
    }

    fn is_simple(&self) -> bool {
        let n = self.vertices.len();
        let edges: Vec<(Point, Point)> = self.edges().collect();
        for i in 0..n {
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    continue;
                }
                if segments_touch(edges[i].0, edges[i].1, edges[j].0, edges[j].1) {
                    return false;
                }
            }
        }
        true
    }

    /// Whether the open interiors overlap (vertex containment or proper edge crossings).
    pub fn overlaps(&self, other: &Polygon) -> bool {
        if self.vertices.iter().any(|&v| other.contains(v)) || other.vertices.iter().any(|&v| self.contains(v)) {
            return true;
        }
        if self.contains(centroid(&other.vertices)) || other.contains(centroid(&self.vertices)) {
            return true;
        }
        for (a, b) in self.edges() {
            for (c, d) in other.edges() {
                if segments_cross_properly(a, b, c, d) {
                    return true;
                }
            }
        }
        false
    }
}

/// Region witnessing the open set condition: an open interval (d = 1) or a polygon interior (d = 2).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Region {
    Interval(f64, f64),
    Polygon(Polygon),
}

impl Region {
    pub fn map(&self, s: &Similarity) -> Region {
        match self {
            Region::Interval(a, b) => {
                let x = s.apply([*a, 0.0])[0];
                let y = s.apply([*b, 0.0])[0];
                Region::Interval(x.min(y), x.max(y))
            }
            Region::Polygon(p) => Region::Polygon(p.map(s)),
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        match self {
            Region::Interval(a, b) => p[0] > *a && p[0] < *b,
            Region::Polygon(poly) => poly.contains(p),
        }
    }

    /// Signed distance to the boundary: negative inside, positive outside.
    ///
    /// Intervals measure along the line only.
    pub fn signed_distance(&self, p: Point) -> f64 {
        match self {
            Region::Interval(a, b) => {
                let x = p[0];
                if x > *a && x < *b {
                    -(x - a).min(b - x)
                } else if x <= *a {
                    a - x
                } else {
                    x - b
                }
            }
            Region::Polygon(poly) => poly.signed_distance(p),
        }
    }

    pub fn overlaps(&self, other: &Region) -> bool {
        match (self, other) {
            (Region::Interval(a, b), Region::Interval(c, d)) => a.max(*c) < b.min(*d),
            (Region::Polygon(p), Region::Polygon(q)) => p.overlaps(q),
            _ => true,
        }
    }

    pub fn bbox(&self) -> (Point, Point) {
        match self {
            Region::Interval(a, b) => ([*a, 0.0], [*b, 0.0]),
            Region::Polygon(p) => p.bbox(),
        }
    }

    pub fn sample_points(&self) -> Vec<Point> {
        match self {
            Region::Interval(a, b) => vec![[*a, 0.0], [*b, 0.0], [(a + b) / 2.0, 0.0]],
            Region::Polygon(p) => {
                let mut pts = p.vertices().to_vec();
                pts.extend(p.edges().map(|(a, b)| [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0]));
                pts
            }
        }
    }
}

pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p[0] - (a[0] + t * dx)).hypot(p[1] - (a[1] + t * dy))
}

fn signed_area(v: &[Point]) -> f64 {
    let n = v.len();
    (0..n)
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
        / 2.0
}

fn centroid(v: &[Point]) -> Point {
    let n = v.len() as f64;
    let (x, y) = v.iter().fold((0.0, 0.0), |acc, p| (acc.0 + p[0], acc.1 + p[1]));
    [x / n, y / n]
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn segments_cross_properly(a: Point, b: Point, c: Point, d: Point) -> bool {
    let scale = 1e-12
        * [a, b, c, d]
            .iter()
            .map(|p| p[0].abs().max(p[1].abs()))
            .fold(1.0, f64::max);
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    ((o1 > scale && o2 < -scale) || (o1 < -scale && o2 > scale))
        && ((o3 > scale && o4 < -scale) || (o3 < -scale && o4 > scale))
}

fn segments_touch(a: Point, b: Point, c: Point, d: Point) -> bool {
    segments_cross_properly(a, b, c, d)
        || point_segment_distance(a, c, d) == 0.0
        || point_segment_distance(b, c, d) == 0.0
        || point_segment_distance(c, a, b) == 0.0
        || point_segment_distance(d, a, b) == 0.0
}
