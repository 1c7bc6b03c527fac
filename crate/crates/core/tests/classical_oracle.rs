//! Sequence norms and Stein-type checkers on diagonal inputs against scalar
//! arithmetic, plus homogeneity and ordering properties.

use ncstein_core::expectation::{make_filtration, FiltrationKind, OperatorSequence};
use ncstein_core::inequality::{check_dual_doob, check_stein_pq, check_stein_qq};
use ncstein_core::opcore::sample::{random_positive_sequence, seeded_rng};
use ncstein_core::opcore::{schatten_norm, Exponent, Operator};
use ncstein_core::seqnorm::{
    column_q_norm, column_q_norm_root_route, crp_norm, l1_norm_positive, linf_norm_positive, row_2_norm,
};
use proptest::prelude::*;

fn e(p: f64) -> Exponent {
    Exponent::new(p).unwrap()
}

fn diagonal_sequence(xs: &[Vec<f64>]) -> OperatorSequence {
    OperatorSequence::positive(xs.iter().map(|v| Operator::from_real_diagonal(v).unwrap()).collect()).unwrap()
}

/// `(mean_i (Σ_n f_n(i)^q)^{p/q})^{1/p}` on equal-mass atoms.
fn scalar_lp_lq(fs: &[Vec<f64>], p: f64, q: f64) -> f64 {
    let atoms = fs[0].len();
    let mut acc = 0.0;
    for i in 0..atoms {
        let inner: f64 = fs.iter().map(|f| f[i].powf(q)).sum();
        acc += inner.powf(p / q);
    }
    (acc / atoms as f64).powf(1.0 / p)
}

fn diagonals(atoms: usize, len: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(0.0f64..3.0, atoms), len)
}

#[test]
fn documented_diagonal_example() {
    // d = 4, N = 3, p = 2.5, q = 1.5.
    let xs = vec![vec![1.0, 0.0, 2.0, 0.5], vec![0.0, 3.0, 1.0, 1.0], vec![0.25, 0.25, 0.0, 4.0]];
    let seq = diagonal_sequence(&xs);
    let got = column_q_norm(&seq, e(2.5), e(1.5)).unwrap().value;
    assert!((got - scalar_lp_lq(&xs, 2.5, 1.5)).abs() <= 1e-10);
}

#[test]
fn documented_diagonal_stein_example() {
    // Dyadic pinching, p = 3, q = 2: pinching fixes diagonals, so both sides
    // are the same classical quantity.
    let filt = make_filtration(&FiltrationKind::DyadicPinching { dim: 4 }).unwrap();
    let xs = vec![vec![1.0, 2.0, 0.0, 1.0], vec![0.5, 0.5, 3.0, 0.0]];
    let r = check_stein_pq(&diagonal_sequence(&xs), &filt, e(3.0), e(2.0), 0).unwrap();
    let oracle = scalar_lp_lq(&xs, 3.0, 2.0);
    assert!((r.lhs.value - oracle).abs() <= 1e-10);
    assert!((r.rhs.value - oracle).abs() <= 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn column_norm_matches_scalar_oracle(xs in diagonals(4, 3), p in 1.0f64..5.0, q in 1.0f64..4.0) {
        prop_assume!(xs.iter().flatten().any(|&v| v > 1e-3));
        let seq = diagonal_sequence(&xs);
        let oracle = scalar_lp_lq(&xs, p, q);
        let got = column_q_norm(&seq, e(p), e(q)).unwrap().value;
        prop_assert!((got - oracle).abs() <= 1e-10 * oracle.max(1.0));
        let row = row_2_norm(&seq, e(p)).unwrap().value;
        prop_assert!((row - scalar_lp_lq(&xs, p, 2.0)).abs() <= 1e-10 * row.max(1.0));
        let l1 = l1_norm_positive(&seq, e(p)).unwrap().value;
        prop_assert!((l1 - scalar_lp_lq(&xs, p, 1.0)).abs() <= 1e-10 * l1.max(1.0));
    }

    #[test]
    fn column_routes_agree(dim in 1usize..5, len in 1usize..4, seed in any::<u64>(), p in 1.0f64..5.0, q in 1.0f64..3.0) {
        let seq = random_positive_sequence(dim, len, &mut seeded_rng(seed)).unwrap();
        let a = column_q_norm(&seq, e(p), e(q)).unwrap().value;
        let b = column_q_norm_root_route(&seq, e(p), e(q)).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1.0));
    }

    #[test]
    fn norms_are_positively_homogeneous(dim in 1usize..5, len in 1usize..4, seed in any::<u64>(), c in 0.01f64..10.0, p in 1.0f64..5.0) {
        let seq = random_positive_sequence(dim, len, &mut seeded_rng(seed)).unwrap();
        let scaled = seq.scale(c);
        for q in [1.0, 1.5, 2.0] {
            let n = column_q_norm(&seq, e(p), e(q)).unwrap().value;
            let m = column_q_norm(&scaled, e(p), e(q)).unwrap().value;
            prop_assert!((m - c * n).abs() <= 1e-10 * (c * n).max(1.0));
        }
        let n = l1_norm_positive(&seq, e(p)).unwrap().value;
        let m = l1_norm_positive(&scaled, e(p)).unwrap().value;
        prop_assert!((m - c * n).abs() <= 1e-10 * (c * n).max(1.0));
    }

    #[test]
    fn crp_at_least_two_is_max_of_sides(dim in 1usize..5, len in 1usize..4, seed in any::<u64>(), p in 2.0f64..5.0) {
        let seq = random_positive_sequence(dim, len, &mut seeded_rng(seed)).unwrap();
        let col = column_q_norm(&seq, e(p), Exponent::TWO).unwrap().value;
        let row = row_2_norm(&seq, e(p)).unwrap().value;
        let crp = crp_norm(&seq, e(p)).unwrap().value;
        prop_assert!((crp - col.max(row)).abs() <= 1e-12 * crp.max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn linf_bracket_sits_between_max_and_sum(dim in 1usize..4, len in 1usize..4, seed in any::<u64>(), p in prop_oneof![Just(1.0), 1.0f64..4.0, Just(f64::INFINITY)]) {
        let seq = random_positive_sequence(dim, len, &mut seeded_rng(seed)).unwrap();
        let b = linf_norm_positive(&seq, e(p)).unwrap();
        let biggest = seq.items().iter().map(|x| schatten_norm(x, e(p))).fold(0.0f64, f64::max);
        let sum = l1_norm_positive(&seq, e(p)).unwrap().value;
        prop_assert!(b.lower.value <= b.upper.value + 1e-8);
        prop_assert!(b.upper.value <= sum * (1.0 + 1e-10));
        prop_assert!(b.lower.value >= biggest * (1.0 - 1e-6));
    }

    #[test]
    fn linf_matches_pointwise_max_on_diagonals(xs in diagonals(4, 3), p in prop_oneof![Just(1.0), 1.0f64..4.0]) {
        prop_assume!(xs.iter().flatten().any(|&v| v > 1e-2));
        let seq = diagonal_sequence(&xs);
        let pointwise: Vec<f64> = (0..4).map(|i| xs.iter().fold(0.0f64, |m, f| m.max(f[i]))).collect();
        let oracle = (pointwise.iter().map(|v| v.powf(p)).sum::<f64>() / 4.0).powf(1.0 / p);
        let b = linf_norm_positive(&seq, e(p)).unwrap();
        prop_assert!((b.lower.value - oracle).abs() <= 1e-6, "{b:?} vs {oracle}");
        prop_assert!((b.upper.value - oracle).abs() <= 1e-6, "{b:?} vs {oracle}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn s_qq_never_exceeds_one(kind in 0usize..3, len in 1usize..5, seed in any::<u64>(), q in 1.0f64..4.0) {
        let kinds = [
            FiltrationKind::DyadicPinching { dim: 4 },
            FiltrationKind::Tensor { local_dims: vec![2, 2] },
            FiltrationKind::Tensor { local_dims: vec![3, 2] },
        ];
        let filt = make_filtration(&kinds[kind]).unwrap().padded(len + 1);
        let seq = random_positive_sequence(filt.dim(), len, &mut seeded_rng(seed)).unwrap();
        let r = check_stein_qq(&seq, &filt, e(q), 1).unwrap();
        prop_assert!(r.ratio.unwrap() <= 1.0 + 1e-8);
        prop_assert!(r.hard_assertion().unwrap().passed);
    }

    #[test]
    fn dual_doob_is_equality_at_one(len in 1usize..5, seed in any::<u64>()) {
        let filt = make_filtration(&FiltrationKind::Tensor { local_dims: vec![2, 2] }).unwrap().padded(len);
        let seq = random_positive_sequence(4, len, &mut seeded_rng(seed)).unwrap();
        let r = check_dual_doob(&seq, &filt, Exponent::ONE).unwrap();
        prop_assert!((r.lhs.value - r.rhs.value).abs() <= 1e-10);
    }

    #[test]
    fn diagonal_stein_matches_scalar_oracle(xs in diagonals(4, 2), lag in 0usize..2, p in 2.0f64..5.0, q in 1.0f64..2.0) {
        prop_assume!(xs.iter().flatten().any(|&v| v > 1e-3));
        let filt = make_filtration(&FiltrationKind::DyadicPinching { dim: 4 }).unwrap();
        let r = check_stein_pq(&diagonal_sequence(&xs), &filt, e(p), e(q), lag).unwrap();
        let oracle = scalar_lp_lq(&xs, p, q);
        prop_assert!((r.lhs.value - oracle).abs() <= 1e-10 * oracle.max(1.0));
        prop_assert!((r.rhs.value - oracle).abs() <= 1e-10 * oracle.max(1.0));
    }
}
