mod common;

use common::*;
use floerkit_core::analyzer::{
    bottom_alexander, check_monotonicity, check_rank_identities, check_rank_inequality, check_symmetry,
    check_twisted_dichotomy, check_vh_conditions, detect_fibered, hfk_hat, hfk_symmetric, hfk_total,
    property_g_report, top_alexander, Assumptions, Comparison, Shape, Status, CONE_EQUALS_VH, TOP_EQUALS_V,
    TRIANGLE,
};
use floerkit_core::homology::map_ranks;
use floerkit_core::surgery::map_vh;
use floerkit_core::{CfkComplex, RankPair, F2};
use num_rational::BigRational;
use proptest::prelude::*;

fn knots() -> Vec<CfkComplex> {
    vec![unknot(), trefoil(), figure_eight(), torus_2(2), torus_2(3)]
}

#[test]
fn hfk_matches_the_oracle() {
    for c in knots() {
        for k in -4..=4 {
            assert_eq!(hfk_total::<F2>(&c, k).unwrap(), hfk_oracle(&c, k), "{} k={k}", c.name);
        }
    }
}

#[test]
fn hfk_examples() {
    let dims: Vec<usize> = (-2..=2).map(|k| hfk_total::<F2>(&figure_eight(), k).unwrap()).collect();
    assert_eq!(dims, [0, 1, 3, 1, 0]);
    // Relative to the base generator c of the trefoil.
    let t = trefoil();
    assert_eq!(hfk_hat::<F2>(&t, 1).unwrap().into_iter().collect::<Vec<_>>(), [(0, 1)]);
    assert_eq!(hfk_hat::<F2>(&t, -1).unwrap().into_iter().collect::<Vec<_>>(), [(-2, 1)]);
}

#[test]
fn top_gradings() {
    let tops: Vec<i64> = knots().iter().map(|c| top_alexander::<F2>(c).unwrap()).collect();
    assert_eq!(tops, [0, 1, 1, 2, 3]);
    for c in knots() {
        assert_eq!(bottom_alexander::<F2>(&c).unwrap(), -top_alexander::<F2>(&c).unwrap());
        assert!(hfk_symmetric::<F2>(&c).unwrap(), "{}", c.name);
    }
}

#[test]
fn fibered_detection() {
    let v = detect_fibered::<F2>(&trefoil()).unwrap();
    assert!(v.fibered && !v.degenerate);
    assert!(detect_fibered::<F2>(&figure_eight()).unwrap().fibered);
    assert!(detect_fibered::<F2>(&unknot()).unwrap().degenerate);

    // A trefoil staircase plus a box of side one: two classes in the top grading.
    let c = assemble(&[1], &[(1, 0)], false);
    let v = detect_fibered::<F2>(&c).unwrap();
    assert_eq!((v.top_alexander, v.top_dim, v.fibered), (1, 2, false));
}

#[test]
fn rank_identities_on_the_fixtures() {
    for c in knots() {
        let r = check_rank_identities::<F2>(&c).unwrap();
        assert!(r.all_pass(), "{}: {:?}", c.name, r.checks);
        let names: Vec<&str> = r.checks.iter().map(|x| x.name.as_str()).collect();
        assert_eq!(names.first(), Some(&TOP_EQUALS_V));
        assert_eq!(names.last(), Some(&TRIANGLE));
        assert!(names.contains(&CONE_EQUALS_VH));
        let q = check_rank_identities::<BigRational>(&c).unwrap();
        assert!(q.all_pass(), "{} over Q: {:?}", c.name, q.checks);
    }
}

#[test]
fn triangle_side_matches_the_oracle() {
    // Independent count of the cone of v at d - 1 against the analyzer.
    for c in knots() {
        let r = check_rank_identities::<F2>(&c).unwrap();
        let tri = r.checks.iter().find(|x| x.name == TRIANGLE).unwrap();
        let (t, f) = v_cone(&c, r.d - 1).pair(14, 2);
        assert_eq!(tri.left, RankPair::new(t, f), "{}", c.name);
    }
}

#[test]
fn unknot_v_plus_h_vanishes_over_f2() {
    // v = h = id on T+, so v + h = 0 in characteristic two.
    let r = map_ranks(&map_vh::<F2>(&unknot(), 0).unwrap()).unwrap();
    assert_eq!((r.kernel, r.cokernel), (RankPair::new(1, 0), RankPair::new(1, 0)));
    let r = map_ranks(&map_vh::<BigRational>(&unknot(), 0).unwrap()).unwrap();
    assert_eq!((r.kernel, r.cokernel), (RankPair::ZERO, RankPair::ZERO));
}

#[test]
fn comparisons() {
    assert_eq!(Comparison::compare(RankPair::new(0, 2), RankPair::new(0, 1)), Comparison::Scalar { holds: true });
    assert_eq!(Comparison::compare(RankPair::new(0, 0), RankPair::new(0, 1)), Comparison::Scalar { holds: false });
    let c = Comparison::compare(RankPair::new(2, 0), RankPair::new(0, 1));
    assert_eq!(c, Comparison::IncomparableScalar { pairwise_holds: true });
    assert!(c.holds());
}

#[test]
fn inequality_on_the_trefoil() {
    let r = check_rank_inequality::<F2>(&trefoil(), &Assumptions::default()).unwrap();
    assert_eq!((r.k, r.degenerate), (0, false));
    assert_eq!(r.left, RankPair::new(2, 0));
    assert_eq!(r.right, RankPair::new(0, 1));
    assert!(matches!(r.comparison, Comparison::IncomparableScalar { .. }));
    assert_eq!(r.conclusion, if r.hypothesis { Status::Holds } else { Status::NotApplicable });

    let u = check_rank_inequality::<F2>(&unknot(), &Assumptions::default()).unwrap();
    assert!(u.degenerate);
    assert_eq!(u.k, 0);
}

#[test]
fn vh_conditions_on_the_trefoil() {
    let r = check_vh_conditions::<F2>(&trefoil(), 0).unwrap();
    assert_eq!(r.v_shape, Shape::Surjective);
    assert_eq!(r.v_ranks.kernel, RankPair::new(0, 1));
    assert!(r.image_h_in_image_v);
    // Both are the degree-zero surjection T+ -> T+ killing the bottom
    // class, and over F2 there is only one.
    assert!(r.v_equals_h);
    assert!(check_vh_conditions::<F2>(&unknot(), 0).unwrap().v_equals_h);
    // Away from zero the degrees differ and h lands lower.
    let r = check_vh_conditions::<F2>(&torus_2(2), 1).unwrap();
    assert!(!r.v_equals_h);
}

#[test]
fn dichotomy_is_not_applicable_in_s3() {
    for c in knots() {
        let d = check_twisted_dichotomy::<F2>(&c).unwrap();
        assert_eq!(d.b_pair, RankPair::new(1, 0));
        assert_eq!(d.status, Status::NotApplicable);
    }
}

#[test]
fn dichotomy_on_a_finite_target() {
    // Two generators in one Alexander grading cancelled diagonally: B+ is
    // a single finite class and v at -1 is zero.
    let c = CfkComplex {
        name: "finite".into(),
        generators: vec![generator("x", 0, 0), generator("y", 0, 1)],
        arrows: vec![arrow("x", "y", 1, 1)],
        flip: Some([("x", "x"), ("y", "y")].iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()),
        ..Default::default()
    };
    let d = check_twisted_dichotomy::<F2>(&c).unwrap();
    assert_eq!(d.b_pair, RankPair::new(0, 1));
    assert!(d.applicable);
    assert_eq!(d.status, Status::Holds);
}

#[test]
fn report_on_the_trefoil() {
    let a = Assumptions { irreducible: true, taut: true, torsion_spinc: false };
    let r = property_g_report::<F2>(&trefoil(), a).unwrap();
    assert_eq!((r.top_alexander, r.norm_value, r.hfk_top_dim), (1, 3, 1));
    assert!(r.fibered_candidate && !r.model_inconsistent);
    assert_eq!(r.twisted_rank_at_top, 1);
    assert_eq!(a.labels(), ["irreducible", "taut"]);
    let status = |prefix: &str| r.propg_conditions.iter().find(|c| c.name.starts_with(prefix)).unwrap().status;
    assert_eq!(status("G1"), Status::Holds);
    assert_eq!(status("G2"), Status::Holds);
    assert_eq!(status("rank identities"), Status::Holds);
    assert_eq!(status("twisted"), Status::NotApplicable);
}

#[test]
fn monotonicity_and_symmetry_on_the_fixtures() {
    for c in knots() {
        assert!(check_monotonicity::<F2>(&c, -4..=4).unwrap().is_empty(), "{}", c.name);
        let (v, h) = check_symmetry::<F2>(&c).unwrap();
        assert_eq!(v, h, "{}", c.name);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn hfk_agrees_and_is_symmetric(c in strategy::complex()) {
        for k in -4..=4 {
            prop_assert_eq!(hfk_total::<F2>(&c, k).unwrap(), hfk_oracle(&c, k));
        }
        prop_assert!(hfk_symmetric::<F2>(&c).unwrap());
        prop_assert_eq!(top_alexander::<F2>(&c).unwrap(), -bottom_alexander::<F2>(&c).unwrap());
    }

    #[test]
    fn identities_hold_on_generated_complexes(c in strategy::complex()) {
        let r = check_rank_identities::<F2>(&c).unwrap();
        prop_assert!(!r.model_inconsistent);
        prop_assert!(r.all_pass(), "{:?}", r.checks);
        let q = check_rank_identities::<BigRational>(&c).unwrap();
        prop_assert!(q.all_pass(), "{:?}", q.checks);
    }

    #[test]
    fn images_are_monotone(c in strategy::complex()) {
        prop_assert!(check_monotonicity::<F2>(&c, -3..=3).unwrap().is_empty());
        let (v, h) = check_symmetry::<F2>(&c).unwrap();
        prop_assert_eq!(v, h);
    }
}
