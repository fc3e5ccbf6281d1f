//! Property tests over random inputs.

mod common;

use common::{brute_force_edt, components_minus_holes};
use fraccurv_core::estimators::{exact_parallel_set, ExactLine};
use fraccurv_core::functionals::{euler_characteristic, interval_functionals, AxisPartition, GridEvaluator};
use fraccurv_core::geometry::{distance_transform, BinaryGrid, GridSpec, Region};
use fraccurv_core::ifs::{similarity_dimension, Ifs, Similarity};
use proptest::prelude::*;

fn grid_strategy(max: usize) -> impl Strategy<Value = BinaryGrid> {
    (1..=max, 1..=max).prop_flat_map(|(w, h)| {
        proptest::collection::vec(any::<bool>(), w * h).prop_map(move |cells| {
            BinaryGrid::from_cells(GridSpec::new([0.0, 0.0], 1.0, w, h).unwrap(), cells).unwrap()
        })
    })
}

/// Seeds inside the frame `[pad, size - pad)²` of a `size × size` grid.
fn framed_seeds(size: usize, pad: usize) -> impl Strategy<Value = BinaryGrid> {
    let inner = size - 2 * pad;
    proptest::collection::vec((0..inner, 0..inner), 1..12).prop_map(move |pts| {
        let mut g = BinaryGrid::empty(GridSpec::new([0.0, 0.0], 1.0, size, size).unwrap());
        for (i, j) in pts {
            g.set(i + pad, j + pad, true);
        }
        g
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn euler_equals_components_minus_holes(g in grid_strategy(12)) {
        prop_assert_eq!(euler_characteristic(&g), components_minus_holes(&g));
    }

    #[test]
    fn distance_transform_is_exact(mut g in grid_strategy(10), i in 0usize..10, j in 0usize..10) {
        let (w, h) = (g.spec.width, g.spec.height);
        g.set(i % w, j % h, true);
        let dg = distance_transform(&g).unwrap();
        let brute = brute_force_edt(&g);
        prop_assert_eq!(dg.squared_cells(), brute.as_slice());
    }

    #[test]
    fn localized_values_add_up(g in framed_seeds(48, 12), eps in 4.0f64..9.0, nx in 1usize..5, ny in 1usize..5) {
        let part = AxisPartition::uniform([0.0, 0.0], [48.0, 48.0], nx, ny).unwrap();
        let dg = distance_transform(&g).unwrap();
        let ev = GridEvaluator::with_partition(&dg, &part).unwrap().evaluate(eps, None).unwrap();
        let loc = ev.localized.unwrap();
        prop_assert_eq!(loc.euler.total(), ev.functionals.chi as f64);
        prop_assert_eq!(loc.boundary.total(), ev.functionals.half_boundary);
        prop_assert_eq!(loc.volume.total(), ev.functionals.volume);
    }

    #[test]
    fn volume_is_monotone_in_eps(g in framed_seeds(48, 12), a in 4.0f64..9.0, b in 4.0f64..9.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let dg = distance_transform(&g).unwrap();
        let ev = GridEvaluator::new(&dg);
        let (vl, vh) = (ev.evaluate(lo, None).unwrap(), ev.evaluate(hi, None).unwrap());
        prop_assert!(vl.functionals.volume <= vh.functionals.volume);
    }

    #[test]
    fn moran_equation_holds(ratios in proptest::collection::vec(0.05f64..0.6, 2..6)) {
        let d = similarity_dimension(&ratios).unwrap();
        let sum: f64 = ratios.iter().map(|r| r.powf(d)).sum();
        prop_assert!((sum - 1.0).abs() < 1e-10);
    }

    #[test]
    fn gap_spectrum_matches_interval_union(r1 in 0.15f64..0.45, r2 in 0.15f64..0.45, eps in 0.002f64..0.6) {
        let ifs = Ifs::new(
            1,
            vec![Similarity::linear(r1, false, 0.0).unwrap(), Similarity::linear(r2, false, 1.0 - r2).unwrap()],
            Region::Interval(0.0, 1.0),
        ).unwrap();
        let exact = ExactLine::new(&ifs, 1e-3).unwrap().functionals(eps);
        let direct = interval_functionals(&exact_parallel_set(&ifs, eps).unwrap());
        prop_assert_eq!(exact.chi, direct.chi);
        prop_assert!((exact.volume - direct.volume).abs() < 1e-9);
    }
}
