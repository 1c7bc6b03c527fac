//! Vector-valued norms of operator sequences: column and row `ℓ_2`, column
//! `ℓ_q`, `CR_p`, and `L_p(M, ℓ_1)` / `L_p(M, ℓ_∞)` on positive sequences.

mod crp;
mod linf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expectation::OperatorSequence;
use crate::opcore::{
    abs_op, hermitian_schatten_norm, psd_power, Exponent, Operator,
};

pub use crp::{crp_norm, crp_norm_with, SplittingOptions, SplittingWitness};
pub use linf::{
    linf_norm_positive, linf_norm_positive_with, DualCertificate, FactorizationWitness,
    LinfBracket, LinfOptions,
};

/// How a reported value relates to the true norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundDirection {
    Exact,
    Lower,
    Upper,
}

impl BoundDirection {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundDirection::Exact => "exact",
            BoundDirection::Lower => "lower",
            BoundDirection::Upper => "upper",
        }
    }
}

/// Evidence backing a non-exact norm value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Dual(DualCertificate),
    Factorization(FactorizationWitness),
    Splitting(SplittingWitness),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormValue {
    pub value: f64,
    pub bound: BoundDirection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

impl NormValue {
    pub fn exact(value: f64) -> Self {
        debug_assert!(value >= 0.0);
        Self { value, bound: BoundDirection::Exact, certificate: None }
    }

    pub(crate) fn bounded(value: f64, bound: BoundDirection, certificate: Certificate) -> Self {
        Self { value, bound, certificate: Some(certificate) }
    }

    /// Drops the certificate, keeping value and direction.
    pub fn without_certificate(&self) -> Self {
        Self { value: self.value, bound: self.bound, certificate: None }
    }
}

pub(crate) fn reject_non_positive(seq: &OperatorSequence) -> Result<()> {
    if seq.is_positive() {
        return Ok(());
    }
    seq.clone().into_positive().map(|_| ())
}

/// `|x|^q` for a sequence item.
fn abs_power(x: &Operator, q: f64, positive: bool) -> Result<Operator> {
    if positive {
        if q == 1.0 {
            Ok(x.hermitian_part())
        } else {
            psd_power(x, q)
        }
    } else if q == 2.0 {
        Ok((&x.adjoint() * x).hermitian_part())
    } else {
        psd_power(&abs_op(x), q)
    }
}

/// `(|x_n|^q)_n`.
pub(crate) fn power_terms(seq: &OperatorSequence, q: f64) -> Result<Vec<Operator>> {
    seq.items().iter().map(|x| abs_power(x, q, seq.is_positive())).collect()
}

pub(crate) fn sum_terms(terms: &[Operator]) -> Operator {
    let mut acc = terms[0].clone();
    for t in &terms[1..] {
        acc = &acc + t;
    }
    acc.hermitian_part()
}

/// `Σ_n |x_n|^q`.
pub(crate) fn sum_of_powers(seq: &OperatorSequence, q: f64) -> Result<Operator> {
    Ok(sum_terms(&power_terms(seq, q)?))
}

pub(crate) fn finite_q(q: Exponent) -> Result<f64> {
    q.finite().ok_or_else(|| {
        Error::OutOfRange("column ℓ_q norm needs finite q; use linf_norm_positive for q = ∞".into())
    })
}

/// `‖(Σ_n |x_n|^q)^{1/q}‖_p` for a PSD sum `s = Σ_n |x_n|^q`.
pub(crate) fn root_norm(s: &Operator, p: Exponent, q: f64) -> Result<f64> {
    if p.finite().is_none_or(|p| p >= q) {
        let inner = match p.finite() {
            None => Exponent::INFINITY,
            Some(p) => Exponent::new(p / q)?,
        };
        Ok(hermitian_schatten_norm(s, inner).powf(1.0 / q))
    } else {
        Ok(hermitian_schatten_norm(&psd_power(s, 1.0 / q)?, p))
    }
}

/// `‖(Σ_n |x_n|^q)^{1/q}‖_p`, evaluated as `‖Σ_n |x_n|^q‖_{p/q}^{1/q}` when
/// `p >= q` and through the explicit `1/q`-th root otherwise.
pub fn column_q_norm(seq: &OperatorSequence, p: Exponent, q: Exponent) -> Result<NormValue> {
    let q = finite_q(q)?;
    if seq.is_zero() {
        return Ok(NormValue::exact(0.0));
    }
    let s = sum_of_powers(seq, q)?;
    Ok(NormValue::exact(root_norm(&s, p, q)?))
}

/// [`column_q_norm`] always through the explicit root `(Σ|x_n|^q)^{1/q}`.
pub fn column_q_norm_root_route(seq: &OperatorSequence, p: Exponent, q: Exponent) -> Result<f64> {
    let q = finite_q(q)?;
    if seq.is_zero() {
        return Ok(0.0);
    }
    let s = sum_of_powers(seq, q)?;
    Ok(hermitian_schatten_norm(&psd_power(&s, 1.0 / q)?, p))
}

/// Row norm `‖(Σ_n |x_n*|^2)^{1/2}‖_p`.
pub fn row_2_norm(seq: &OperatorSequence, p: Exponent) -> Result<NormValue> {
    column_q_norm(&seq.adjoint(), p, Exponent::TWO)
}

/// `‖Σ_n x_n‖_p` for a positive sequence.
pub fn l1_norm_positive(seq: &OperatorSequence, p: Exponent) -> Result<NormValue> {
    reject_non_positive(seq)?;
    if seq.is_zero() {
        return Ok(NormValue::exact(0.0));
    }
    Ok(NormValue::exact(hermitian_schatten_norm(&seq.sum(), p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcore::sample::{random_positive_sequence, random_psd, seeded_rng, gaussian_matrix};
    use crate::opcore::schatten_norm;

    fn e(p: f64) -> Exponent {
        Exponent::new(p).unwrap()
    }

    #[test]
    fn singleton_column_norm_is_schatten() {
        let mut rng = seeded_rng(1);
        let x = gaussian_matrix(3, &mut rng);
        let seq = OperatorSequence::new(vec![x.clone()]).unwrap();
        for (p, q) in [(1.0, 1.0), (2.5, 1.5), (3.0, 2.0), (1.5, 3.0)] {
            let got = column_q_norm(&seq, e(p), e(q)).unwrap().value;
            let expected = schatten_norm(&x, e(p));
            assert!((got - expected).abs() < 1e-10 * expected, "p={p} q={q}: {got} vs {expected}");
        }
    }

    #[test]
    fn copies_scale_by_n_to_the_one_over_q() {
        let mut rng = seeded_rng(2);
        let x = random_psd(3, &mut rng);
        for n in [1usize, 2, 5] {
            let seq = OperatorSequence::constant(x.clone(), n).unwrap();
            for (p, q) in [(2.0, 1.0), (3.0, 1.5), (2.0, 2.0)] {
                let got = column_q_norm(&seq, e(p), e(q)).unwrap().value;
                let expected = (n as f64).powf(1.0 / q) * schatten_norm(&x, e(p));
                assert!((got - expected).abs() < 1e-10 * expected);
            }
        }
    }

    #[test]
    fn both_routes_agree() {
        let mut rng = seeded_rng(3);
        let seq = random_positive_sequence(4, 3, &mut rng).unwrap();
        for (p, q) in [(2.5, 1.5), (3.0, 2.0), (4.0, 1.0), (2.0, 2.0)] {
            let a = column_q_norm(&seq, e(p), e(q)).unwrap().value;
            let b = column_q_norm_root_route(&seq, e(p), e(q)).unwrap();
            assert!((a - b).abs() <= 1e-9 * a.max(1.0));
        }
    }

    #[test]
    fn rejects_infinite_q() {
        let seq = OperatorSequence::new(vec![Operator::identity(2)]).unwrap();
        assert!(matches!(
            column_q_norm(&seq, e(2.0), Exponent::INFINITY),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn empty_sequence_rejected() {
        assert_eq!(OperatorSequence::new(vec![]).unwrap_err(), Error::EmptySequence);
    }

    #[test]
    fn row_norm_examples() {
        let mut rng = seeded_rng(4);
        let h = crate::opcore::sample::random_hermitian(3, &mut rng);
        let seq = OperatorSequence::new(vec![h.clone(), h.scale(0.5)]).unwrap();
        let col = column_q_norm(&seq, e(3.0), Exponent::TWO).unwrap().value;
        let row = row_2_norm(&seq, e(3.0)).unwrap().value;
        assert!((col - row).abs() < 1e-12 * col);

        let x = gaussian_matrix(3, &mut rng);
        let single = OperatorSequence::new(vec![x.clone()]).unwrap();
        let row = row_2_norm(&single, e(2.5)).unwrap().value;
        assert!((row - schatten_norm(&x, e(2.5))).abs() < 1e-10 * row);
    }

    #[test]
    fn l1_examples() {
        let mut rng = seeded_rng(5);
        let fam = crate::opcore::sample::random_projection_family(4, 3, &mut rng).unwrap();
        let seq = OperatorSequence::positive(fam).unwrap();
        for p in [1.0, 2.0, 5.0, f64::INFINITY] {
            assert!((l1_norm_positive(&seq, e(p)).unwrap().value - 1.0).abs() < 1e-12);
        }
        let bad = OperatorSequence::new(vec![Operator::from_real_diagonal(&[1.0, -1.0]).unwrap()]).unwrap();
        assert!(matches!(l1_norm_positive(&bad, e(2.0)), Err(Error::NotPositive { .. })));
    }

    #[test]
    fn zero_sequence_is_exactly_zero() {
        let seq = OperatorSequence::positive(vec![Operator::zeros(3); 2]).unwrap();
        for v in [
            column_q_norm(&seq, e(2.0), e(1.5)).unwrap(),
            row_2_norm(&seq, e(2.0)).unwrap(),
            l1_norm_positive(&seq, e(2.0)).unwrap(),
            crp_norm(&seq, e(1.5)).unwrap(),
        ] {
            assert_eq!(v, NormValue::exact(0.0));
        }
        let b = linf_norm_positive(&seq, e(2.0)).unwrap();
        assert_eq!(b.lower, NormValue::exact(0.0));
        assert_eq!(b.upper, NormValue::exact(0.0));
    }
}
