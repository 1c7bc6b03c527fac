//! Spectral routines against a hand-written one-sided Jacobi SVD, plus
//! norm invariants.

use ncstein_core::opcore::sample::{gaussian_matrix, random_psd, random_unitary, seeded_rng};
use ncstein_core::opcore::{abs_op, conjugate_exponent, psd_power, schatten_norm, singular_values, Exponent, Operator};
use num_complex::Complex64;
use proptest::prelude::*;

/// One-sided Jacobi (Hestenes) on the columns of `x`; returns singular values
/// in descending order.
fn jacobi_singular_values(x: &Operator) -> Vec<f64> {
    let d = x.dim();
    let mut cols: Vec<Vec<Complex64>> = (0..d).map(|j| (0..d).map(|i| x.entry(i, j)).collect()).collect();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..d {
            for q in p + 1..d {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = cols[p].iter().zip(&cols[q]).map(|(a, b)| a.conj() * b).sum();
                let g = gamma.norm();
                if g <= 1e-15 * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                // Rotate the phase out of column q, then apply a real rotation.
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(q);
                for (a, b) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    let (x, y) = (*a, *b * phase.conj());
                    *a = x * c - y * s;
                    *b = x * s + y * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = cols.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

fn power_mean(sv: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        sv.iter().fold(0.0f64, |m, &s| m.max(s))
    } else {
        (sv.iter().map(|s| s.powf(p)).sum::<f64>() / sv.len() as f64).powf(1.0 / p)
    }
}

fn exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![
        Just(Exponent::ONE),
        Just(Exponent::TWO),
        Just(Exponent::INFINITY),
        (1.0f64..6.0).prop_map(|p| Exponent::new(p).unwrap()),
    ]
}

#[test]
fn jacobi_oracle_on_known_matrix() {
    // [[3, 0], [4, 5]] has singular values sqrt(45) and sqrt(5).
    let x = Operator::from_real_rows(&[&[3.0, 0.0], &[4.0, 5.0]]).unwrap();
    let sv = jacobi_singular_values(&x);
    assert!((sv[0] - 45f64.sqrt()).abs() < 1e-13);
    assert!((sv[1] - 5f64.sqrt()).abs() < 1e-13);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn singular_values_match_jacobi(dim in 1usize..9, seed in any::<u64>()) {
        let x = gaussian_matrix(dim, &mut seeded_rng(seed));
        let ours = singular_values(&x);
        let oracle = jacobi_singular_values(&x);
        let scale = oracle[0].max(1.0);
        for (a, b) in ours.iter().zip(&oracle) {
            prop_assert!((a - b).abs() <= 1e-10 * scale, "{ours:?} vs {oracle:?}");
        }
    }

    #[test]
    fn schatten_norm_matches_oracle_power_mean(dim in 1usize..8, seed in any::<u64>(), p in exponent()) {
        let x = gaussian_matrix(dim, &mut seeded_rng(seed));
        let oracle = power_mean(&jacobi_singular_values(&x), p.value());
        prop_assert!((schatten_norm(&x, p) - oracle).abs() <= 1e-10 * oracle.max(1.0));
    }

    #[test]
    fn norm_homogeneous_and_unitarily_invariant(dim in 1usize..7, seed in any::<u64>(), c in -5.0f64..5.0, p in exponent()) {
        let mut rng = seeded_rng(seed);
        let x = gaussian_matrix(dim, &mut rng);
        let u = random_unitary(dim, &mut rng);
        let v = random_unitary(dim, &mut rng);
        let n = schatten_norm(&x, p);
        prop_assert!((schatten_norm(&x.scale(c), p) - c.abs() * n).abs() <= 1e-10 * n.max(1.0));
        let uxv = &(&u * &x) * &v;
        prop_assert!((schatten_norm(&uxv, p) - n).abs() <= 1e-10 * n.max(1.0));
    }

    #[test]
    fn normalized_norms_increase_with_p(dim in 1usize..7, seed in any::<u64>(), p in 1.0f64..4.0, dp in 0.0f64..4.0) {
        let x = gaussian_matrix(dim, &mut seeded_rng(seed));
        let lo = schatten_norm(&x, Exponent::new(p).unwrap());
        let hi = schatten_norm(&x, Exponent::new(p + dp).unwrap());
        prop_assert!(lo <= hi * (1.0 + 1e-12));
    }

    #[test]
    fn triangle_inequality(dim in 1usize..7, seed in any::<u64>(), p in exponent()) {
        let mut rng = seeded_rng(seed);
        let x = gaussian_matrix(dim, &mut rng);
        let y = gaussian_matrix(dim, &mut rng);
        let sum = &x + &y;
        prop_assert!(schatten_norm(&sum, p) <= (schatten_norm(&x, p) + schatten_norm(&y, p)) * (1.0 + 1e-12));
    }

    #[test]
    fn abs_squares_to_gram(dim in 1usize..7, seed in any::<u64>()) {
        let x = gaussian_matrix(dim, &mut seeded_rng(seed));
        let a = abs_op(&x);
        let gram = &x.adjoint() * &x;
        let diff = &(&a * &a) - &gram;
        prop_assert!(diff.op_norm() <= 1e-10 * gram.op_norm().max(1.0));
    }

    #[test]
    fn powers_compose(dim in 1usize..6, seed in any::<u64>(), r in 0.1f64..2.0, s in 0.1f64..2.0) {
        let a = random_psd(dim, &mut seeded_rng(seed));
        let lhs = &psd_power(&a, r).unwrap() * &psd_power(&a, s).unwrap();
        let rhs = psd_power(&a, r + s).unwrap();
        prop_assert!((&lhs - &rhs).op_norm() <= 1e-9 * rhs.op_norm().max(1.0));
    }

    #[test]
    fn conjugation_is_an_involution(p in exponent()) {
        let back = conjugate_exponent(conjugate_exponent(p));
        prop_assert!(back.is_infinite() == p.is_infinite());
        if let (Some(a), Some(b)) = (back.finite(), p.finite()) {
            prop_assert!((a - b).abs() <= 1e-12 * b);
        }
    }
}
