mod common;

use proptest::collection::{btree_set, vec};
use proptest::prelude::*;

use mstd::analysis::{classify, nathanson_stabilize};
use mstd::combinators::{BaseExpansion, SumDiffOracle};
use mstd::constructions::{build_2d, closed_form_1d, fringe_1d, ConstructionParams, Fringe1d};
use mstd::io::{parse_pts, write_pts};
use mstd::montecarlo::wilson_interval;
use mstd::{
    apply_affine, apply_injective, dilate, iterated_sumdiff, minkowski_sum, negate, Backend, IntegerAffineMap,
    PointSet, SumDiffSpec,
};

fn set_in(dim: usize, lo: i64, hi: i64, max_len: usize) -> impl Strategy<Value = PointSet> {
    btree_set(vec(lo..=hi, dim), 1..=max_len).prop_map(move |pts| PointSet::from_points(dim, pts).unwrap())
}

fn any_set() -> impl Strategy<Value = PointSet> {
    (1usize..=3).prop_flat_map(|d| set_in(d, -6, 6, 10))
}

fn same_dim_pair() -> impl Strategy<Value = (PointSet, PointSet)> {
    (1usize..=3).prop_flat_map(|d| (set_in(d, -6, 6, 8), set_in(d, -6, 6, 8)))
}

fn same_dim_triple() -> impl Strategy<Value = (PointSet, PointSet, PointSet)> {
    (1usize..=2).prop_flat_map(|d| (set_in(d, -5, 5, 6), set_in(d, -5, 5, 6), set_in(d, -5, 5, 6)))
}

fn spec_upto(level: u32) -> impl Strategy<Value = SumDiffSpec> {
    (0..=level).prop_flat_map(move |s| (Just(s), 0..=level - s)).prop_filter_map("empty spec", |(s, d)| {
        (s + d > 0).then(|| SumDiffSpec::new(s, d))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn minkowski_matches_oracle_and_commutes((a, b) in same_dim_pair()) {
        let ab = minkowski_sum(&a, &b).unwrap();
        prop_assert_eq!(&ab, &minkowski_sum(&b, &a).unwrap());
        prop_assert_eq!(common::naive(&ab), common::add(&common::naive(&a), &common::naive(&b)));
    }

    #[test]
    fn minkowski_associates((a, b, c) in same_dim_triple()) {
        let left = minkowski_sum(&minkowski_sum(&a, &b).unwrap(), &c).unwrap();
        let right = minkowski_sum(&a, &minkowski_sum(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn sign_swap_preserves_size(a in any_set(), spec in spec_upto(4)) {
        let lhs = iterated_sumdiff(&a, spec).unwrap();
        let rhs = iterated_sumdiff(&a, spec.mirrored()).unwrap();
        prop_assert_eq!(lhs.len(), rhs.len());
        prop_assert_eq!(negate(&lhs).unwrap(), rhs);
    }

    #[test]
    fn translation_preserves_size(a in any_set(), spec in spec_upto(4), t in vec(-50i64..=50, 3)) {
        let moved = a.translate(&t[..a.dim()]).unwrap();
        prop_assert_eq!(
            iterated_sumdiff(&a, spec).unwrap().len(),
            iterated_sumdiff(&moved, spec).unwrap().len()
        );
    }

    #[test]
    fn doubling_matches_naive_fold(a in any_set(), spec in spec_upto(3)) {
        let fast = iterated_sumdiff(&a, spec).unwrap();
        let slow = common::sumdiff(&common::naive(&a), a.dim(), spec.s, spec.d);
        prop_assert_eq!(common::naive(&fast), slow);
    }

    #[test]
    fn unimodular_maps_preserve_sizes(
        a in set_in(2, -5, 5, 10),
        m in 0i64..=4,
        lower in -3i64..=3,
        offset in vec(-20i64..=20, 2),
        spec in spec_upto(4),
    ) {
        let upper = IntegerAffineMap::new(vec![vec![1, m], vec![0, 1]], offset.clone()).unwrap();
        let both = IntegerAffineMap::new(vec![vec![1, m], vec![lower, lower * m + 1]], offset).unwrap();
        prop_assert_eq!(both.determinant(), 1);
        let size = iterated_sumdiff(&a, spec).unwrap().len();
        for f in [&upper, &both] {
            let image = apply_affine(&a, f).unwrap();
            prop_assert_eq!(image.len(), a.len());
            prop_assert_eq!(iterated_sumdiff(&image, spec).unwrap().len(), size);
        }
    }

    #[test]
    fn injective_scaling_preserves_sizes(a in set_in(2, -5, 5, 10), spec in spec_upto(3)) {
        let f = IntegerAffineMap::linear(vec![vec![2, 1], vec![1, 3]]).unwrap();
        let image = apply_injective(&a, &f).unwrap();
        prop_assert_eq!(
            iterated_sumdiff(&image, spec).unwrap().len(),
            iterated_sumdiff(&a, spec).unwrap().len()
        );
    }

    #[test]
    fn dilation_distributes((a, b) in same_dim_pair(), c in 1i64..=5) {
        let lhs = dilate(&minkowski_sum(&a, &b).unwrap(), c).unwrap();
        let rhs = minkowski_sum(&dilate(&a, c).unwrap(), &dilate(&b, c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn backends_agree((a, b) in same_dim_pair()) {
        let dense = minkowski_sum(&a.with_backend(Backend::Dense).unwrap(), &b.with_backend(Backend::Dense).unwrap()).unwrap();
        let sparse = minkowski_sum(&a.with_backend(Backend::Sparse).unwrap(), &b.with_backend(Backend::Sparse).unwrap()).unwrap();
        prop_assert_eq!(dense, sparse);
    }

    #[test]
    fn pts_round_trip(a in prop_oneof![
        (1usize..=3).prop_flat_map(|d| set_in(d, -1_000_000_000_000, 1_000_000_000_000, 20)),
        set_in(4, -1_000_000, 1_000_000, 20),
    ]) {
        let text = write_pts(&a);
        prop_assert!(text.ends_with('\n'));
        prop_assert_eq!(parse_pts(&text).unwrap(), a);
    }

    #[test]
    fn classify_matches_oracle(a in any_set()) {
        let c = classify(&a).unwrap();
        let n = common::naive(&a);
        prop_assert_eq!(c.sum_size as usize, common::add(&n, &n).len());
        prop_assert_eq!(c.diff_size as usize, common::sumdiff(&n, a.dim(), 1, 1).len());
    }

    #[test]
    fn closed_form_1d_fidelity(k in 2i64..=4, a in 0u32..=5, b in 0u32..=5) {
        prop_assume!(a + b >= 1);
        let l = common::naive(&fringe_1d(k, Fringe1d::L).unwrap());
        let r = common::naive(&fringe_1d(k, Fringe1d::R).unwrap());
        let mut acc = common::Naive::from([vec![0]]);
        for _ in 0..a { acc = common::add(&acc, &l); }
        for _ in 0..b { acc = common::add(&acc, &r); }
        prop_assert_eq!(common::naive(&closed_form_1d(k, a as i64, b as i64).unwrap()), acc);
    }

    #[test]
    fn wilson_brackets_proportion(trials in 1u64..=1_000_000, frac in 0.0f64..=1.0) {
        let hits = ((trials as f64) * frac) as u64;
        let (lo, hi) = wilson_interval(hits, trials);
        let p = hits as f64 / trials as f64;
        prop_assert!(0.0 <= lo && lo <= p && p <= hi && hi <= 1.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn product_law(
        (a, b) in (1usize..=2).prop_flat_map(|d| (set_in(d, 0, 5, 5), set_in(d, 0, 5, 5))),
        spec in spec_upto(2),
    ) {
        let e = BaseExpansion::with_minimal_m(vec![a.clone(), b.clone()], 2).unwrap();
        let c = e.materialize().unwrap();
        let expected = iterated_sumdiff(&a, spec).unwrap().len() * iterated_sumdiff(&b, spec).unwrap().len();
        prop_assert_eq!(iterated_sumdiff(&c, spec).unwrap().len(), expected);
        prop_assert_eq!(e.sumdiff_len(spec).unwrap() as usize, expected);
    }

    #[test]
    fn stabilization_predicts_kfold(tail in btree_set(1i64..=9, 1..=3)) {
        let mut xs = vec![0];
        xs.extend(tail);
        let g = xs.iter().fold(0, |g, &x| num_gcd(g, x));
        prop_assume!(g == 1);
        let a = PointSet::from_ints(&xs);
        let p = nathanson_stabilize(&a).unwrap();
        for k in [p.k_threshold, p.k_threshold + 1, p.k_threshold + 2] {
            let ka = iterated_sumdiff(&a, SumDiffSpec::new(k as u32, 0)).unwrap();
            prop_assert_eq!(p.predict(k), ka);
        }
    }

    #[test]
    fn constructions_are_deterministic(n in 41i64..=60, slope in 0i64..=2) {
        let p = ConstructionParams::cube(2, 2, n, SumDiffSpec::SUM, SumDiffSpec::DIFF).with_slopes(vec![slope]);
        let x = build_2d(&p).unwrap().set;
        let y = build_2d(&p).unwrap().set;
        prop_assert_eq!(write_pts(&x), write_pts(&y));
        prop_assert_eq!(parse_pts(&write_pts(&x)).unwrap(), x);
    }
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a } else { num_gcd(b, a % b) }
}
