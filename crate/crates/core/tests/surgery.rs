mod common;

use common::*;
use floerkit_core::homology::map_ranks;
use floerkit_core::surgery::{
    build_a, build_b, large_surgery_at, large_surgery_homology, map_h, map_v, map_vh, spinc_index, twisted_map,
    zero_surgery_cone, zero_surgery_homology, zero_surgery_twisted,
};
use floerkit_core::{CfkComplex, Error, RankPair, F2};
use num_rational::BigRational;
use proptest::prelude::*;

fn tower_index(p: &floerkit_core::PlusComplex<F2>, label: &str) -> usize {
    p.towers.iter().position(|t| t.label == label).unwrap()
}

#[test]
fn a_of_trefoil_at_zero() {
    let a = build_a::<F2>(&trefoil(), 0).unwrap();
    let bottoms: Vec<(&str, i64)> = a.towers.iter().map(|t| (t.label.as_str(), t.bottom)).collect();
    assert_eq!(bottoms, [("a", 0), ("b", 0), ("c", -1)]);
}

#[test]
fn a_agrees_with_b_once_k_reaches_the_top() {
    for c in [trefoil(), figure_eight(), torus_2(3)] {
        let top = c.top_alexander_bound();
        for k in top..top + 3 {
            assert_eq!(build_a::<F2>(&c, k).unwrap(), build_b::<F2>(&c).unwrap(), "{} {k}", c.name);
        }
    }
}

#[test]
fn v_on_single_cells() {
    let v = map_v::<F2>(&trefoil(), 0).unwrap();
    let c = tower_index(&v.source, "c");
    assert!(v.apply_cell(c, -1).is_empty());
    assert_eq!(v.apply_cell(c, 2), [((tower_index(&v.target, "c"), 2), F2(true))]);
}

#[test]
fn h_on_single_cells() {
    // [c, i] -> [a, i + 1]; [a, i] -> [c, i - 1], dead at i = 0.
    let h = map_h::<F2>(&trefoil(), 0).unwrap();
    let (sa, sc) = (tower_index(&h.source, "a"), tower_index(&h.source, "c"));
    let (ta, tc) = (tower_index(&h.target, "a"), tower_index(&h.target, "c"));
    assert_eq!(h.apply_cell(sc, -1), [((ta, 0), F2(true))]);
    assert!(h.apply_cell(sa, 0).is_empty());
    assert_eq!(h.apply_cell(sa, 3), [((tc, 2), F2(true))]);
    assert_eq!(h.degree, 0);
    assert_eq!(map_h::<F2>(&trefoil(), 2).unwrap().degree, -4);
}

#[test]
fn h_carries_the_flip_sign() {
    let h = map_h::<BigRational>(&figure_eight(), 0).unwrap();
    let a = h.source.towers.iter().position(|t| t.label == "a").unwrap();
    let e = h.entries.iter().find(|e| e.from == a).unwrap();
    assert_eq!(e.coeff, BigRational::from_integer((-1).into()));
}

#[test]
fn maps_commute_with_differentials() {
    for c in [unknot(), trefoil(), figure_eight(), torus_2(2)] {
        for k in -3..=3 {
            map_v::<BigRational>(&c, k).unwrap().check(6).unwrap();
            map_h::<BigRational>(&c, k).unwrap().check(6).unwrap();
        }
    }
}

#[test]
fn spinc_representatives() {
    assert_eq!(spinc_index(5, 7).unwrap(), 2);
    assert_eq!(spinc_index(5, 3).unwrap(), -2);
    assert_eq!(spinc_index(3, -1).unwrap(), -1);
    assert!(matches!(spinc_index(4, 2), Err(Error::AmbiguousSpinc { n: 4, .. })));
    assert!(matches!(spinc_index(4, -2), Err(Error::AmbiguousSpinc { .. })));
    assert!(matches!(spinc_index(0, 0), Err(Error::NonPositiveSurgery(0))));
}

#[test]
fn large_surgery_matches_the_oracle() {
    for c in [unknot(), trefoil(), figure_eight(), torus_2(2)] {
        let g = c.top_alexander_bound();
        let n = (2 * g).max(1);
        for t in 0..n {
            let Ok(k) = spinc_index(n, t) else { continue };
            let r = large_surgery_homology::<F2>(&c, n, t, false).unwrap();
            assert!(r.hypothesis_verified);
            assert_eq!(r.k, k);
            let (towers, finite) = Brute::region(&c, 0, Some(k), false).pair(12, 2);
            assert_eq!(r.module.rank_pair(), RankPair::new(towers, finite), "{} n={n} k={k}", c.name);
        }
    }
}

#[test]
fn explicit_k_allows_the_tie() {
    let r = large_surgery_at::<F2>(&trefoil(), 2, 1, false).unwrap();
    assert_eq!(r.module.rank_pair(), RankPair::new(1, 0));
    assert!(matches!(large_surgery_homology::<F2>(&trefoil(), 2, 1, false), Err(Error::AmbiguousSpinc { .. })));
}

#[test]
fn genus_bound_and_force() {
    assert!(matches!(large_surgery_at::<F2>(&trefoil(), 1, 0, false), Err(Error::GenusBound { n: 1, d: 1 })));
    let r = large_surgery_at::<F2>(&trefoil(), 1, 0, true).unwrap();
    assert!(!r.hypothesis_verified);
    assert!(matches!(large_surgery_at::<F2>(&trefoil(), -3, 0, true), Err(Error::NonPositiveSurgery(-3))));
}

#[test]
fn zero_surgery_needs_a_flip() {
    let mut c = trefoil();
    c.flip = None;
    assert!(matches!(zero_surgery_homology::<F2>(&c, 0), Err(Error::FlipRequired)));
    assert!(matches!(zero_surgery_twisted::<F2>(&c, 0), Err(Error::FlipRequired)));
}

#[test]
fn zero_surgery_cones_match_the_oracle() {
    for c in [unknot(), trefoil(), figure_eight(), torus_2(2), torus_2(3)] {
        for k in -3..=3 {
            let m = zero_surgery_homology::<F2>(&c, k).unwrap();
            let (t, f) = vh_cone(&c, k, 1, false).pair(14, 2);
            assert_eq!(m.rank_pair(), RankPair::new(t, f), "{} k={k}", c.name);
        }
    }
}

#[test]
fn trefoil_zero_surgery_has_two_towers() {
    let (t, f) = vh_cone(&trefoil(), 0, 1, false).pair(10, 2);
    assert_eq!((t, f), (2, 0));
    let m = zero_surgery_homology::<F2>(&trefoil(), 0).unwrap();
    assert_eq!(m.rank_pair(), RankPair::new(2, 0));
    // Gradings live mod 2k, so k = 0 keeps them integral.
    assert_eq!(m.modulus, 0);
    assert_eq!(zero_surgery_homology::<F2>(&trefoil(), 1).unwrap().modulus, 2);
}

#[test]
fn cones_are_complexes() {
    for c in [trefoil(), figure_eight(), torus_2(2)] {
        for k in -2..=2 {
            assert!(zero_surgery_cone::<F2>(&c, k).unwrap().square_vanishes(6));
            assert!(zero_surgery_cone::<BigRational>(&c, k).unwrap().square_vanishes(6));
        }
    }
}

/// Generic rank of the twisted cone: specialize `T` at a few points mod P
/// and keep the smallest homology, which is attained off a finite set.
fn twisted_oracle(c: &CfkComplex, k: i64) -> usize {
    [12_345i64, 777_001, 314_159]
        .iter()
        .map(|&t| {
            let (towers, finite) = vh_cone(c, k, t, true).pair(14, P);
            assert_eq!(towers, 0, "twisted cones of knots have no towers");
            finite
        })
        .min()
        .unwrap()
}

#[test]
fn twisted_ranks_match_the_specialized_oracle() {
    for c in [unknot(), trefoil(), figure_eight(), torus_2(2)] {
        for k in -2..=2 {
            let t = zero_surgery_twisted::<BigRational>(&c, k).unwrap();
            assert_eq!(t.corank, 0);
            assert_eq!(t.generic_rank, twisted_oracle(&c, k), "{} k={k}", c.name);
        }
    }
}

#[test]
fn twisted_examples() {
    assert_eq!(zero_surgery_twisted::<F2>(&unknot(), 0).unwrap().generic_rank, 0);
    assert_eq!(zero_surgery_twisted::<F2>(&trefoil(), 0).unwrap().generic_rank, 1);
    assert_eq!(zero_surgery_twisted::<F2>(&trefoil(), 1).unwrap().generic_rank, 0);
    assert_eq!(zero_surgery_twisted::<BigRational>(&trefoil(), 0).unwrap().generic_rank, 1);
}

#[test]
fn twisted_map_is_a_chain_map() {
    for k in -1..=1 {
        twisted_map::<F2>(&figure_eight(), k).unwrap().check(5).unwrap();
        twisted_map::<BigRational>(&figure_eight(), k).unwrap().check(5).unwrap();
    }
}

#[test]
fn v_ranks_on_the_trefoil() {
    let r = map_ranks(&map_v::<F2>(&trefoil(), 0).unwrap()).unwrap();
    assert_eq!((r.image, r.kernel, r.cokernel), (RankPair::new(1, 0), RankPair::new(0, 1), RankPair::ZERO));
    // Past the top grading v is an isomorphism.
    let r = map_ranks(&map_v::<F2>(&trefoil(), 1).unwrap()).unwrap();
    assert_eq!((r.kernel, r.cokernel), (RankPair::ZERO, RankPair::ZERO));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn generated_maps_are_chain_maps(c in strategy::complex(), k in -3i64..=3) {
        map_vh::<F2>(&c, k).unwrap().check(5).unwrap();
        map_vh::<BigRational>(&c, k).unwrap().check(5).unwrap();
    }

    #[test]
    fn generated_cones_match_the_oracle(c in strategy::complex(), k in -2i64..=2) {
        let m = zero_surgery_homology::<F2>(&c, k).unwrap();
        let (t, f) = vh_cone(&c, k, 1, false).pair(16, 2);
        prop_assert_eq!(m.rank_pair(), RankPair::new(t, f));
    }

    #[test]
    fn generated_twisted_ranks_match(c in strategy::complex(), k in -1i64..=1) {
        let t = zero_surgery_twisted::<BigRational>(&c, k).unwrap();
        prop_assert_eq!(t.generic_rank, twisted_oracle(&c, k));
    }

    #[test]
    fn large_surgery_is_a(c in strategy::complex(), k in -3i64..=3) {
        let n = (2 * c.top_alexander_bound()).max(2 * k.abs()).max(1);
        let r = large_surgery_at::<F2>(&c, n, k, false).unwrap();
        let (t, f) = Brute::region(&c, 0, Some(k), false).pair(16, 2);
        prop_assert_eq!(r.module.rank_pair(), RankPair::new(t, f));
    }
}
