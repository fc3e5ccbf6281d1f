//! Standard self-similar sets used by tests, fixtures and the CLI.

use super::{Ifs, Similarity};
use crate::geometry::{Polygon, Region};

/// Middle-third Cantor set on `[0,1]`.
pub fn cantor() -> Ifs {
    let third = 1.0 / 3.0;
    let maps = vec![
        Similarity::linear(third, false, 0.0).unwrap(),
        Similarity::linear(third, false, 2.0 / 3.0).unwrap(),
    ];
    Ifs::new(1, maps, Region::Interval(0.0, 1.0)).unwrap()
}

/// Non-lattice pair `x/2` and `x/3 + 2/3` on `[0,1]`.
pub fn nonlattice_pair() -> Ifs {
    let maps = vec![
        Similarity::linear(0.5, false, 0.0).unwrap(),
        Similarity::linear(1.0 / 3.0, false, 2.0 / 3.0).unwrap(),
    ];
    Ifs::new(1, maps, Region::Interval(0.0, 1.0)).unwrap()
}

pub fn gasket_triangle() -> Polygon {
    Polygon::new(vec![[0.0, 0.0], [1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]]).unwrap()
}

/// Sierpinski gasket on the unit equilateral triangle.
pub fn sierpinski_gasket() -> Ifs {
    let h = 3f64.sqrt() / 4.0;
    let maps = [[0.0, 0.0], [0.5, 0.0], [0.25, h]]
        .into_iter()
        .map(|t| Similarity::planar(0.5, 0.0, false, t).unwrap())
        .collect();
    Ifs::new(2, maps, Region::Polygon(gasket_triangle())).unwrap()
}

/// Sierpinski carpet on the unit square.
pub fn sierpinski_carpet() -> Ifs {
    let third = 1.0 / 3.0;
    let mut maps = Vec::new();
    for j in 0..3 {
        for i in 0..3 {
            if i == 1 && j == 1 {
                continue;
            }
            maps.push(Similarity::planar(third, 0.0, false, [i as f64 * third, j as f64 * third]).unwrap());
        }
    }
    let square = Polygon::new(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
    Ifs::new(2, maps, Region::Polygon(square)).unwrap()
}
