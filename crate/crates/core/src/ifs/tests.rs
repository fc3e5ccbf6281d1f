use super::catalog::*;
use super::*;
use crate::error::Error;
use crate::geometry::Region;
use rand::{Rng, SeedableRng};

fn near(a: [f64; 2], b: [f64; 2], tol: f64) -> bool {
    (a[0] - b[0]).hypot(a[1] - b[1]) <= tol
}

#[test]
fn apply_word_order_and_ratio() {
    let g = sierpinski_gasket();
    let (p, r) = g.apply_word(&Word::empty(), [0.3, 0.2]).unwrap();
    assert_eq!((p, r), ([0.3, 0.2], 1.0));
    assert_eq!(
        g.apply_word(&Word::from_one_based(&[1, 2]), [0.0, 0.0]).unwrap().1,
        0.25
    );

    let maps = vec![
        Similarity::linear(0.5, false, 0.0).unwrap(),
        Similarity::linear(0.5, false, 0.5).unwrap(),
    ];
    let line = Ifs::new(1, maps, Region::Interval(0.0, 1.0)).unwrap();
    let (p, _) = line.apply_word(&Word::from_one_based(&[1, 2]), [0.0, 0.0]).unwrap();
    assert_eq!(p[0], 0.25);
    let composed = line.word_map(&Word::from_one_based(&[1, 2])).unwrap();
    assert_eq!(composed.apply([0.0, 0.0])[0], 0.25);
}

#[test]
fn letter_out_of_range() {
    let c = cantor();
    assert!(matches!(
        c.apply_word(&Word::from_letters(&[2]), [0.0, 0.0]),
        Err(Error::InvalidInput(_))
    ));
}

#[test]
fn cloud_contains_fixed_points() {
    let h = 1e-3;
    let c = cantor();
    let cloud = c.attractor_cloud(h).unwrap();
    assert_eq!(cloud.points.len(), 2usize.pow(cloud.depth as u32));
    for x in [0.0, 1.0, 1.0 / 3.0] {
        assert!(cloud.points.iter().any(|&p| near(p, [x, 0.0], h)));
    }
    let g = sierpinski_gasket();
    let cloud = g.attractor_cloud(1e-2).unwrap();
    assert_eq!(cloud.points.len(), 3usize.pow(cloud.depth as u32));
    for v in [[0.0, 0.0], [1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]] {
        assert!(cloud.points.iter().any(|&p| near(p, v, 1e-2)));
    }
}

#[test]
fn cloud_budget_is_enforced() {
    let g = sierpinski_carpet().with_word_budget(1000);
    match g.attractor_cloud(1e-3) {
        Err(Error::Budget { budget, .. }) => assert_eq!(budget, 1000),
        other => panic!("{other:?}"),
    }
}

#[test]
fn cloud_prefix_decoding() {
    let g = sierpinski_gasket();
    let cloud = g.cloud_at_depth(3).unwrap();
    for i in [0usize, 5, 13, 26] {
        let w = cloud.prefix_of(i, 3, 3);
        let (p, _) = g.apply_word(&w, g.maps()[0].fixed_point()).unwrap();
        assert!(near(p, cloud.points[i], 1e-15));
    }
}

#[test]
fn derived_invariants() {
    for f in [cantor(), nonlattice_pair(), sierpinski_gasket(), sierpinski_carpet()] {
        let s: f64 = f.ratios().iter().map(|r| r.powf(f.dimension())).sum();
        assert!((s - 1.0).abs() < 1e-12);
        assert!(f.reference_radius() > 2f64.sqrt() * f.diam());
        assert!(f.eta() > 0.0);
    }
    assert!((cantor().diam() - 1.0).abs() < 2e-9);
    assert!((sierpinski_gasket().diam() - 1.0).abs() < 2e-9);
    assert!((sierpinski_carpet().diam() - 2f64.sqrt()).abs() < 3e-9);
}

#[test]
fn reference_radius_override_is_checked() {
    assert!(cantor().with_reference_radius(1.0).is_err());
    assert_eq!(cantor().with_reference_radius(2.0).unwrap().reference_radius(), 2.0);
}

#[test]
fn stopping_set_examples() {
    let c = cantor().with_reference_radius(1.5).unwrap();
    let s = c.stopping_set(1.0).unwrap();
    assert_eq!(s.words, vec![Word::from_one_based(&[1]), Word::from_one_based(&[2])]);
    assert!((s.mass(c.dimension()) - 1.0).abs() < 1e-12);
    let s = c.stopping_set(0.4).unwrap();
    assert_eq!(s.len(), 4);
    assert!(s.words.iter().all(|w| w.len() == 2));

    let maps = vec![
        Similarity::linear(0.5, false, 0.0).unwrap(),
        Similarity::linear(0.25, false, 0.75).unwrap(),
    ];
    let f = Ifs::new(1, maps, Region::Interval(0.0, 1.0))
        .unwrap()
        .with_reference_radius(1.5)
        .unwrap();
    let s = f.stopping_set(0.5).unwrap();
    assert_eq!(
        s.words,
        vec![
            Word::from_one_based(&[1, 1]),
            Word::from_one_based(&[1, 2]),
            Word::from_one_based(&[2])
        ]
    );
    let x = (5f64.sqrt() - 1.0) / 2.0;
    assert!((2.0 * x * x + x.powi(3) - 1.0).abs() < 1e-14);
    assert!((s.mass(f.dimension()) - 1.0).abs() < 1e-12);
}

#[test]
fn stopping_set_range_errors() {
    let c = cantor();
    assert!(matches!(c.stopping_set(0.0), Err(Error::OutOfRange { .. })));
    assert!(matches!(
        c.stopping_set(c.reference_radius() * 1.01),
        Err(Error::OutOfRange { .. })
    ));
}

#[test]
fn stopping_set_invariants_random_eps() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    for f in [nonlattice_pair(), sierpinski_gasket(), cantor()] {
        let radius = f.reference_radius();
        let ratios = f.ratios();
        for _ in 0..100 {
            let eps = radius * rng.gen_range(1e-3f64..1.0).powf(1.5);
            let s = f.stopping_set(eps).unwrap();
            assert!((s.mass(f.dimension()) - 1.0).abs() < 1e-10);
            for w in &s.words {
                assert!(!w.is_empty());
                let parent = w.parent().unwrap().ratio(&ratios);
                assert!(radius * w.ratio(&ratios) < eps && eps <= radius * parent);
            }
            // lexicographic order plus adjacency check suffices for prefix-freeness
            for pair in s.words.windows(2) {
                assert!(pair[0] < pair[1]);
                assert!(!pair[0].is_prefix_of(&pair[1]));
            }
        }
    }
}

#[test]
fn stopping_sets_refine_monotonically() {
    let f = nonlattice_pair();
    let radius = f.reference_radius();
    let coarse = f.stopping_set(0.3 * radius).unwrap();
    let fine = f.stopping_set(0.01 * radius).unwrap();
    for w in &fine.words {
        assert!(coarse.words.iter().any(|c| c.is_prefix_of(w)));
    }
}

#[test]
fn stopping_cylinders_cover_the_cloud() {
    let g = sierpinski_gasket();
    let cloud = g.cloud_at_depth(6).unwrap();
    let s = g.stopping_set(0.2).unwrap();
    let x0 = g.maps()[0].fixed_point();
    let sub = g.cloud_at_depth(3).unwrap();
    for p in cloud.points.iter().step_by(7) {
        let covered = s.iter().any(|(w, r)| {
            let m = g.word_map(w).unwrap();
            sub.points
                .iter()
                .chain(std::iter::once(&x0))
                .any(|&q| near(m.apply(q), *p, r * g.diam()))
        });
        assert!(covered);
    }
}

#[test]
fn cylinder_measures() {
    let g = sierpinski_gasket();
    assert!((g.cylinder_measure(&Word::from_one_based(&[2])).unwrap() - 1.0 / 3.0).abs() < 1e-12);
    assert_eq!(g.cylinder_measure(&Word::empty()).unwrap(), 1.0);
    let w = Word::from_one_based(&[3, 1]);
    let sum: f64 = (0..3).map(|i| g.cylinder_measure(&w.child(i)).unwrap()).sum();
    assert!((sum - g.cylinder_measure(&w).unwrap()).abs() < 1e-14);
}

#[test]
fn open_set_violations_are_reported() {
    let maps = vec![
        Similarity::linear(0.6, false, 0.0).unwrap(),
        Similarity::linear(0.6, false, 0.4).unwrap(),
    ];
    assert!(Ifs::new(1, maps, Region::Interval(0.0, 1.0)).is_err());
}
