use crate::error::{Error, Result};
use crate::expectation::{is_adapted, Filtration, Lag, OperatorSequence};
use crate::opcore::{hermitian_schatten_norm, min_eigenvalue, Exponent, Operator, HERMITIAN_TOLERANCE};
use crate::seqnorm::{
    column_q_norm, crp_norm, l1_norm_positive, linf_norm_positive_with, power_terms,
    reject_non_positive, root_norm, sum_terms, LinfBracket, LinfOptions, NormValue,
};

use super::report::{ratio_of, InequalityId, RatioReport, ReportParams};

const UNITARY_TOLERANCE: f64 = 1e-10;
const PROJECTION_TOLERANCE: f64 = 1e-10;

fn lag_of(lag: usize) -> Result<Lag> {
    u8::try_from(lag)
        .ok()
        .and_then(|l| Lag::try_from(l).ok())
        .ok_or_else(|| Error::OutOfRange(format!("lag must be 0 or 1, got {lag}")))
}

fn finite(p: Exponent, name: &'static str) -> Result<f64> {
    p.finite().ok_or(Error::InvalidExponent { value: f64::INFINITY, constraint: name })
}

/// Range of `(p, q)` with a proved Stein inequality: `p = q`, or
/// `1 <= q <= 2` with `p >= q`.
fn stein_range(p: Exponent, q: Exponent) -> Result<(f64, f64)> {
    let pv = finite(p, "p must be finite")?;
    let qv = finite(q, "q must be finite")?;
    if qv > pv {
        return Err(Error::InvalidExponent { value: qv, constraint: "q <= p" });
    }
    if qv > 2.0 && pv != qv {
        return Err(Error::InvalidExponent { value: qv, constraint: "q <= 2 unless p = q" });
    }
    Ok((pv, qv))
}

/// `(E_i(x_i))_i` after checking that `len + lag` levels exist.
fn expected(seq: &OperatorSequence, filt: &Filtration, lag: usize) -> Result<OperatorSequence> {
    seq.check_against(filt, lag)?;
    seq.expect_termwise(filt)
}

fn stein_report(
    id: InequalityId,
    seq: &OperatorSequence,
    filt: &Filtration,
    p: Exponent,
    q: Exponent,
    lag: usize,
) -> Result<RatioReport> {
    lag_of(lag)?;
    let (_, qv) = stein_range(p, q)?;
    if qv != 2.0 {
        reject_non_positive(seq)?;
    }
    column_report(id, seq, filt, p, q, lag)
}

fn column_report(
    id: InequalityId,
    seq: &OperatorSequence,
    filt: &Filtration,
    p: Exponent,
    q: Exponent,
    lag: usize,
) -> Result<RatioReport> {
    let lhs = column_q_norm(&expected(seq, filt, lag)?, p, q)?;
    let rhs = column_q_norm(seq, p, q)?;
    Ok(RatioReport::new(id, lhs, rhs, ReportParams { p, q, lag }))
}

/// `‖(Σ |E_{n-lag}(x_n)|^q)^{1/q}‖_p` against `‖(Σ |x_n|^q)^{1/q}‖_p`.
///
/// Positive sequences are required unless `q = 2`.
pub fn check_stein_pq(
    seq: &OperatorSequence,
    filt: &Filtration,
    p: Exponent,
    q: Exponent,
    lag: usize,
) -> Result<RatioReport> {
    stein_report(InequalityId::SPq, seq, filt, p, q, lag)
}

/// [`check_stein_pq`] at `p = q`, where the constant is 1.
pub fn check_stein_qq(seq: &OperatorSequence, filt: &Filtration, q: Exponent, lag: usize) -> Result<RatioReport> {
    stein_report(InequalityId::SQq, seq, filt, q, q, lag)
}

/// `‖(Σ E_n(y_n* x_n y_n)^q)^{1/q}‖_p` against `‖(Σ y_n* x_n^q y_n)^{1/q}‖_p`
/// for unitaries `y_n`. With `y_n = 1` this is [`check_stein_pq`] exactly.
pub fn check_stein_isometry(
    seq: &OperatorSequence,
    isometries: &OperatorSequence,
    filt: &Filtration,
    p: Exponent,
    q: Exponent,
    lag: usize,
) -> Result<RatioReport> {
    lag_of(lag)?;
    let pv = finite(p, "p must be finite")?;
    let qv = finite(q, "q must be finite")?;
    if qv > 2.0 {
        return Err(Error::InvalidExponent { value: qv, constraint: "1 <= q <= 2" });
    }
    if pv < qv {
        return Err(Error::InvalidExponent { value: pv, constraint: "p >= q" });
    }
    reject_non_positive(seq)?;
    if isometries.len() != seq.len() {
        return Err(Error::LengthMismatch(format!(
            "{} isometries for a sequence of length {}",
            isometries.len(),
            seq.len()
        )));
    }
    if isometries.dim() != seq.dim() {
        return Err(Error::DimensionMismatch { expected: seq.dim(), found: isometries.dim() });
    }
    let identity = Operator::identity(seq.dim());
    for y in isometries.items() {
        let residual = (&(&y.adjoint() * y) - &identity).op_norm();
        if residual > UNITARY_TOLERANCE {
            return Err(Error::NotUnitary { residual });
        }
    }

    let conjugated = OperatorSequence::new(
        seq.items().iter().zip(isometries.items()).map(|(x, y)| x.conjugate_by(y)).collect(),
    )?
    .into_positive()?;
    let lhs = column_q_norm(&expected(&conjugated, filt, lag)?, p, q)?;

    let rhs_terms: Vec<Operator> = power_terms(seq, qv)?
        .iter()
        .zip(isometries.items())
        .map(|(t, y)| t.conjugate_by(y))
        .collect();
    let rhs = if seq.is_zero() { 0.0 } else { root_norm(&sum_terms(&rhs_terms), p, qv)? };
    Ok(RatioReport::new(
        InequalityId::Isometry,
        lhs,
        NormValue::exact(rhs),
        ReportParams { p, q, lag },
    ))
}

/// `‖Σ E_n(x_n)‖_p` against `‖Σ x_n‖_p` for positive `x_n`.
pub fn check_dual_doob(seq: &OperatorSequence, filt: &Filtration, p: Exponent) -> Result<RatioReport> {
    reject_non_positive(seq)?;
    let seq = if seq.is_positive() { seq.clone() } else { seq.clone().into_positive()? };
    let lhs = l1_norm_positive(&expected(&seq, filt, 0)?, p)?;
    let rhs = l1_norm_positive(&seq, p)?;
    Ok(RatioReport::new(InequalityId::Dd, lhs, rhs, ReportParams { p, q: Exponent::ONE, lag: 0 }))
}

fn reject_p_one(p: Exponent) -> Result<()> {
    if p == Exponent::ONE {
        return Err(Error::InvalidExponent { value: 1.0, constraint: "p > 1 for ℓ_∞-valued inequalities" });
    }
    Ok(())
}

/// Report whose `lhs` is the bracket's upper end; the interval spans
/// `[lhs.lower / rhs.upper, lhs.upper / rhs.lower]`.
fn bracket_report(
    id: InequalityId,
    lhs: LinfBracket,
    rhs_lower: NormValue,
    rhs_upper: f64,
    params: ReportParams,
) -> RatioReport {
    let lo = ratio_of(lhs.lower.value, rhs_upper);
    let hi = ratio_of(lhs.upper.value, rhs_lower.value);
    let mut lhs_reported = lhs.upper;
    lhs_reported.value = lhs_reported.value.max(lhs.lower.value);
    RatioReport::new(id, lhs_reported, rhs_lower, params).with_interval(lo, hi)
}

pub fn check_doob_maximal(x: &Operator, filt: &Filtration, p: Exponent) -> Result<RatioReport> {
    check_doob_maximal_with(x, filt, p, &LinfOptions::default())
}

/// `‖sup_n E_n(x)‖_p` (as an `ℓ_∞` bracket over all levels) against `‖x‖_p`.
pub fn check_doob_maximal_with(
    x: &Operator,
    filt: &Filtration,
    p: Exponent,
    options: &LinfOptions,
) -> Result<RatioReport> {
    reject_p_one(p)?;
    let min = min_eigenvalue(x);
    if min < -HERMITIAN_TOLERANCE * x.op_norm().max(1.0) {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    if x.dim() != filt.dim() {
        return Err(Error::DimensionMismatch { expected: filt.dim(), found: x.dim() });
    }
    let martingale = OperatorSequence::new(
        (0..filt.len()).map(|n| filt.expect(n, x)).collect::<Result<Vec<_>>>()?,
    )?
    .into_positive()?;
    let lhs = linf_norm_positive_with(&martingale, p, options)?;
    let rhs = hermitian_schatten_norm(&x.hermitian_part(), p);
    Ok(bracket_report(
        InequalityId::DoobMax,
        lhs,
        NormValue::exact(rhs),
        rhs,
        ReportParams { p, q: Exponent::INFINITY, lag: 0 },
    ))
}

pub fn check_sp_inf(seq: &OperatorSequence, filt: &Filtration, p: Exponent, lag: usize) -> Result<RatioReport> {
    check_sp_inf_with(seq, filt, p, lag, &LinfOptions::default())
}

/// `ℓ_∞` norm of `(E_{n-lag}(x_n))` against that of `(x_n)`, both bracketed.
pub fn check_sp_inf_with(
    seq: &OperatorSequence,
    filt: &Filtration,
    p: Exponent,
    lag: usize,
    options: &LinfOptions,
) -> Result<RatioReport> {
    lag_of(lag)?;
    reject_p_one(p)?;
    reject_non_positive(seq)?;
    let seq = if seq.is_positive() { seq.clone() } else { seq.clone().into_positive()? };
    let lhs = linf_norm_positive_with(&expected(&seq, filt, lag)?, p, options)?;
    let rhs = linf_norm_positive_with(&seq, p, options)?;
    let rhs_upper = rhs.upper.value;
    let mut rhs_lower = rhs.lower;
    if rhs.upper.value == 0.0 {
        rhs_lower = rhs.upper;
    }
    Ok(bracket_report(
        InequalityId::SPInf,
        lhs,
        rhs_lower,
        rhs_upper,
        ReportParams { p, q: Exponent::INFINITY, lag },
    ))
}

/// `CR_p` norms of `(E_{n-lag}(x_n))` and `(x_n)` for adapted `x`.
pub fn check_crp_stein(seq: &OperatorSequence, filt: &Filtration, p: Exponent, lag: usize) -> Result<RatioReport> {
    let l = lag_of(lag)?;
    let pv = finite(p, "1 < p < ∞")?;
    if pv <= 1.0 {
        return Err(Error::InvalidExponent { value: pv, constraint: "1 < p < ∞" });
    }
    let check = is_adapted(seq, filt, l)?;
    if !check.adapted {
        return Err(Error::NotAdapted { residual: check.residual });
    }
    let lhs = crp_norm(&expected(seq, filt, lag)?, p)?;
    let rhs = crp_norm(seq, p)?;
    Ok(RatioReport::new(InequalityId::Crp, lhs, rhs, ReportParams { p, q: Exponent::TWO, lag }))
}

fn check_projection_family(projs: &[Operator]) -> Result<()> {
    for (i, r) in projs.iter().enumerate() {
        let idem = (&(r * r) - r).op_norm();
        let herm = (&r.adjoint() - r).op_norm();
        if idem.max(herm) > PROJECTION_TOLERANCE {
            return Err(Error::NotProjectionFamily(format!(
                "item {i} is not an orthogonal projection (residual {:.3e})",
                idem.max(herm)
            )));
        }
        for (j, s) in projs.iter().enumerate().skip(i + 1) {
            let overlap = (r * s).op_norm();
            if overlap > PROJECTION_TOLERANCE {
                return Err(Error::NotProjectionFamily(format!(
                    "items {i} and {j} are not orthogonal (‖r_i r_j‖ = {overlap:.3e})"
                )));
            }
        }
    }
    Ok(())
}

/// `‖(Σ E_n(r_n)^q)^{1/q}‖_p` for mutually orthogonal projections `r_n`,
/// against the constant bound 1 on `‖(Σ r_n^q)^{1/q}‖_p = ‖Σ r_n‖_p^{…} <= 1`.
pub fn check_projections(filt: &Filtration, p: Exponent, q: Exponent, projs: &[Operator]) -> Result<RatioReport> {
    let pv = finite(p, "p must be finite")?;
    let qv = finite(q, "q must be finite")?;
    if qv > 2.0 || pv <= 2.0 {
        return Err(Error::InvalidExponent {
            value: if qv > 2.0 { qv } else { pv },
            constraint: "1 <= q <= 2 < p",
        });
    }
    check_projection_family(projs)?;
    let seq = OperatorSequence::positive(projs.to_vec())?;
    let lhs = column_q_norm(&expected(&seq, filt, 0)?, p, q)?;
    Ok(RatioReport::new(InequalityId::Projections, lhs, NormValue::exact(1.0), ReportParams { p, q, lag: 0 }))
}

/// `‖(Σ |E_{n-1}(x_n)|^2)^{1/2}‖_1` against `‖(Σ |x_n|^2)^{1/2}‖_1` for
/// sequences adapted with lag 1.
pub fn check_adapted_s12(seq: &OperatorSequence, filt: &Filtration) -> Result<RatioReport> {
    let check = is_adapted(seq, filt, Lag::One)?;
    if !check.adapted {
        return Err(Error::NotAdapted { residual: check.residual });
    }
    column_report(InequalityId::S12Adapted, seq, filt, Exponent::ONE, Exponent::TWO, 1)
}
