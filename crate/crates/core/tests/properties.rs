use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pleat::bending::{bend_point, BendConfig};
use pleat::hyperbolic::{dist_h2, dist_h3, GeodesicSegment, MobiusMap, PointH2};
use pleat::lamination::random::{point_in_disk, random_lamination};
use pleat::lamination::FiniteLamination;
use pleat::surface::{intersection_number, punctured_torus, slope_word, FuchsianSurface, Letter};

fn lamination(seed: u64, n: usize) -> FiniteLamination {
    random_lamination(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

fn point() -> impl Strategy<Value = PointH2> {
    (-5.0f64..5.0, 0.05f64..5.0).prop_map(|(x, y)| PointH2::new(x, y).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn measure_is_additive_along_a_segment(seed in 0u64..1000, n in 1usize..20, a in point(), b in point(), t in 0.05f64..0.95) {
        let lam = lamination(seed, n);
        prop_assume!(dist_h2(&a, &b) > 1e-6);
        let s = GeodesicSegment::new(a, b).unwrap();
        let mid = s.point_at(t * s.length());
        prop_assume!(lam.leaf_through(&mid, 1e-9).is_none());
        let whole = lam.transversal_measure(&s);
        let split = lam.path_measure(&[a, mid, b]).unwrap();
        prop_assert!((whole - split).abs() < 1e-12, "{} vs {}", whole, split);
    }

    #[test]
    fn norm_lies_between_heaviest_leaf_and_total(seed in 0u64..1000, n in 1usize..15) {
        let lam = lamination(seed, n);
        let norm = lam.norm();
        prop_assert!(norm >= lam.max_weight());
        prop_assert!(norm <= lam.total_weight() + 1e-12);
    }

    #[test]
    fn json_round_trip(seed in 0u64..1000, n in 0usize..12) {
        let lam = lamination(seed, n);
        let back = FiniteLamination::from_json(&lam.to_json()).unwrap();
        prop_assert_eq!(back, lam);
    }

    #[test]
    fn tree_distance_is_a_metric(seed in 0u64..1000, n in 1usize..25, s2 in 0u64..1000) {
        let lam = lamination(seed, n);
        let tree = lam.dual_tree();
        let mut rng = ChaCha8Rng::seed_from_u64(s2);
        let c = PointH2::new(0.0, 1.0).unwrap();
        let [x, y, z] = [0, 1, 2].map(|_| tree.project(&point_in_disk(&mut rng, &c, 5.0)));
        prop_assert_eq!(tree.tree_distance(x, x), 0.0);
        prop_assert_eq!(tree.tree_distance(x, y), tree.tree_distance(y, x));
        prop_assert!(tree.tree_distance(x, z) <= tree.tree_distance(x, y) + tree.tree_distance(y, z) + 1e-12);
    }

    #[test]
    fn bending_commutes_with_isometries_of_the_lamination(seed in 0u64..1000, n in 1usize..10, p in point(), q in point(), shift in -3.0f64..3.0, scale in 0.3f64..3.0) {
        let lam = lamination(seed, n);
        let m = MobiusMap::from_real(scale.sqrt(), shift / scale.sqrt(), 0.0, 1.0 / scale.sqrt()).unwrap();
        let moved = lam.transformed(&m).unwrap();
        let (a, b) = (BendConfig::standard(lam), BendConfig::standard(moved));
        // distances between bent points are intrinsic up to the choice of base region,
        // which only matters through a global isometry of H³ when the base moves along
        let base_fixed = a.tree().project(&PointH2::new(0.0, 1.0).unwrap())
            == a.tree().project(&m.inverse().apply_h2(&PointH2::new(0.0, 1.0).unwrap()).unwrap());
        prop_assume!(base_fixed);
        let d1 = dist_h3(&bend_point(&a, &p), &bend_point(&a, &q));
        let d2 = dist_h3(&bend_point(&b, &m.apply_h2(&p).unwrap()), &bend_point(&b, &m.apply_h2(&q).unwrap()));
        prop_assert!((d1 - d2).abs() < 1e-8 * d1.max(1.0), "{} vs {}", d1, d2);
    }

    #[test]
    fn slope_words_have_the_right_letter_counts(p in 0i64..40, q in 1i64..40) {
        prop_assume!(num_integer::gcd(p, q) == 1);
        let w = slope_word(p, q).unwrap();
        prop_assert_eq!(w.count(Letter::A) as i64, p);
        prop_assert_eq!(w.count(Letter::B) as i64, q);
        prop_assert_eq!(intersection_number((p, q), (p, q)), 0);
    }
}

#[test]
fn surfaces_from_traces_and_generators_agree() {
    let default = FuchsianSurface::default_torus();
    let (x, y, z) = default.trace_triple();
    assert!(default.is_complete_punctured_torus(1e-9));
    let rebuilt = punctured_torus(x, y, z).unwrap();
    let (x2, y2, z2) = rebuilt.trace_triple();
    assert!((x - x2).abs() < 1e-9 && (y - y2).abs() < 1e-9 && (z - z2).abs() < 1e-9);
    let from_json = FuchsianSurface::from_json(r#"{"traces": [3, 3, 3]}"#).unwrap();
    assert!(from_json.is_complete_punctured_torus(1e-9));
    assert!(FuchsianSurface::from_json(r#"{"traces": [3, 3, 3], "generators": [[1,1,1,2],[1,-1,-1,2]]}"#).is_err());
}
