//! `CR_p` norm. For `p >= 2` it is the larger of the column and row norms;
//! for `p < 2` it is an infimum over splittings `x_n = a_n + b_n`, searched
//! by gradient descent on the row part `b`.

use serde::{Deserialize, Serialize};

use super::{column_q_norm, row_2_norm, Certificate, NormValue, BoundDirection};
use crate::error::{Error, Result};
use crate::expectation::OperatorSequence;
use crate::opcore::{hermitian_eig, Exponent, Operator};

/// Splitting `x_n = column_part_n + row_part_n` realizing a `CR_p` upper bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplittingWitness {
    pub column_part: OperatorSequence,
    pub row_part: OperatorSequence,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplittingOptions {
    pub max_iterations: usize,
    pub relative_tolerance: f64,
}

impl Default for SplittingOptions {
    fn default() -> Self {
        Self { max_iterations: 2000, relative_tolerance: 1e-12 }
    }
}

pub fn crp_norm(seq: &OperatorSequence, p: Exponent) -> Result<NormValue> {
    crp_norm_with(seq, p, &SplittingOptions::default())
}

pub fn crp_norm_with(
    seq: &OperatorSequence,
    p: Exponent,
    options: &SplittingOptions,
) -> Result<NormValue> {
    if seq.is_zero() {
        return Ok(NormValue::exact(0.0));
    }
    match p.finite() {
        Some(pv) if pv < 2.0 => split_infimum(seq, pv, options),
        _ => {
            let col = column_q_norm(seq, p, Exponent::TWO)?.value;
            let row = row_2_norm(seq, p)?.value;
            Ok(NormValue::exact(col.max(row)))
        }
    }
}

/// Value and gradient of `‖(Σ a_n* a_n)^{1/2}‖_p` with respect to each `a_n`.
fn column_value_grad(a: &[Operator], p: f64) -> Result<(f64, Vec<Operator>)> {
    let dim = a[0].dim();
    let mut g = Operator::zeros(dim);
    for x in a {
        g = &g + &(&x.adjoint() * x);
    }
    let eig = hermitian_eig(&g.hermitian_part())?;
    let top = eig.max_eigenvalue().max(0.0);
    if top == 0.0 {
        return Ok((0.0, vec![Operator::zeros(dim); a.len()]));
    }
    let mean = eig.eigenvalues.iter().map(|&l| l.max(0.0).powf(p / 2.0)).sum::<f64>() / dim as f64;
    let value = mean.powf(1.0 / p);
    let floor = 1e-12 * top;
    let factor = value.powf(1.0 - p) / dim as f64;
    let weight = eig.map(|l| factor * l.max(floor).powf(p / 2.0 - 1.0));
    Ok((value, a.iter().map(|x| x * &weight).collect()))
}

struct SplitObjective<'a> {
    x: &'a [Operator],
    p: f64,
}

impl SplitObjective<'_> {
    fn column_part(&self, b: &[Operator]) -> Vec<Operator> {
        self.x.iter().zip(b).map(|(x, b)| x - b).collect()
    }

    fn value(&self, b: &[Operator]) -> Result<f64> {
        let a = self.column_part(b);
        let bt: Vec<Operator> = b.iter().map(Operator::adjoint).collect();
        Ok(column_value_grad(&a, self.p)?.0 + column_value_grad(&bt, self.p)?.0)
    }

    fn value_grad(&self, b: &[Operator]) -> Result<(f64, Vec<Operator>)> {
        let a = self.column_part(b);
        let bt: Vec<Operator> = b.iter().map(Operator::adjoint).collect();
        let (cv, cg) = column_value_grad(&a, self.p)?;
        let (rv, rg) = column_value_grad(&bt, self.p)?;
        let grad = cg.iter().zip(&rg).map(|(c, r)| &r.adjoint() - c).collect();
        Ok((cv + rv, grad))
    }
}

fn norm_sq(ops: &[Operator]) -> f64 {
    ops.iter().map(|o| o.frobenius_norm().powi(2)).sum()
}

fn split_infimum(seq: &OperatorSequence, p: f64, options: &SplittingOptions) -> Result<NormValue> {
    if !(1.0..=2.0).contains(&p) {
        return Err(Error::InvalidExponent { value: p, constraint: "1 <= p <= 2 for the splitting branch" });
    }
    let x = seq.items();
    let obj = SplitObjective { x, p };
    let zero = vec![Operator::zeros(seq.dim()); x.len()];

    let mut best_b: Vec<Operator> = x.iter().map(|o| o.scale(0.5)).collect();
    let mut best = obj.value(&best_b)?;
    for candidate in [zero.clone(), x.to_vec()] {
        let v = obj.value(&candidate)?;
        if v < best {
            best = v;
            best_b = candidate;
        }
    }

    let mut b = x.iter().map(|o| o.scale(0.5)).collect::<Vec<_>>();
    let (mut f, mut grad) = obj.value_grad(&b)?;
    let scale = norm_sq(x).sqrt();
    let mut step = 0.1 * scale / norm_sq(&grad).sqrt().max(f64::MIN_POSITIVE);
    for _ in 0..options.max_iterations {
        let gn = norm_sq(&grad);
        if gn == 0.0 || step * gn.sqrt() < 1e-15 * scale {
            break;
        }
        let trial: Vec<Operator> = b.iter().zip(&grad).map(|(b, g)| b - &g.scale(step)).collect();
        let (ft, gt) = obj.value_grad(&trial)?;
        if ft < f - 1e-4 * step * gn {
            let improvement = (f - ft) / f.max(f64::MIN_POSITIVE);
            b = trial;
            f = ft;
            grad = gt;
            step *= 1.5;
            if improvement < options.relative_tolerance {
                break;
            }
        } else {
            step *= 0.5;
        }
    }
    if f < best {
        best = f;
        best_b = b;
    }

    let column_part = obj.column_part(&best_b);
    let witness = SplittingWitness {
        column_part: OperatorSequence::new(column_part)?,
        row_part: OperatorSequence::new(best_b)?,
    };
    Ok(NormValue::bounded(best, BoundDirection::Upper, Certificate::Splitting(witness)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcore::sample::{gaussian_matrix, random_hermitian, seeded_rng};

    fn e(p: f64) -> Exponent {
        Exponent::new(p).unwrap()
    }

    #[test]
    fn p_at_least_two_is_max_of_exact_norms() {
        let mut rng = seeded_rng(10);
        let seq = OperatorSequence::new(vec![gaussian_matrix(3, &mut rng), gaussian_matrix(3, &mut rng)]).unwrap();
        let v = crp_norm(&seq, e(3.0)).unwrap();
        let col = column_q_norm(&seq, e(3.0), Exponent::TWO).unwrap().value;
        let row = row_2_norm(&seq, e(3.0)).unwrap().value;
        assert_eq!(v.bound, BoundDirection::Exact);
        assert_eq!(v.value, col.max(row));
    }

    #[test]
    fn splitting_below_trivial_candidates() {
        let mut rng = seeded_rng(11);
        let seq = OperatorSequence::new(vec![gaussian_matrix(2, &mut rng), gaussian_matrix(2, &mut rng)]).unwrap();
        let v = crp_norm(&seq, e(1.5)).unwrap();
        let col = column_q_norm(&seq, e(1.5), Exponent::TWO).unwrap().value;
        let row = row_2_norm(&seq, e(1.5)).unwrap().value;
        assert_eq!(v.bound, BoundDirection::Upper);
        assert!(v.value <= col.min(row) + 1e-9);
        let Some(Certificate::Splitting(w)) = &v.certificate else { panic!("missing witness") };
        for ((a, b), x) in w.column_part.items().iter().zip(w.row_part.items()).zip(seq.items()) {
            assert!((&(a + b) - x).max_abs_entry() < 1e-12);
        }
    }

    #[test]
    fn split_branch_matches_max_branch_at_two_for_hermitian() {
        let mut rng = seeded_rng(12);
        let seq = OperatorSequence::new(vec![random_hermitian(3, &mut rng), random_hermitian(3, &mut rng)]).unwrap();
        let max_branch = crp_norm(&seq, Exponent::TWO).unwrap().value;
        let inf_branch = split_infimum(&seq, 2.0, &SplittingOptions::default()).unwrap().value;
        assert!((inf_branch - max_branch).abs() < 1e-6, "{inf_branch} vs {max_branch}");
    }
}
