//! Standalone checks of the operator inequalities behind the isometry
//! theorem: `E(x)^q <= E(x^q)` for operator convex `t^q`, and `A^r <= B^r`
//! whenever `A <= B` for operator monotone `t^r`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expectation::{cond_exp, SubalgebraSpec};
use crate::opcore::sample::{complex_gaussian, random_psd, seeded_rng};
use crate::opcore::{min_eigenvalue, psd_power, Operator, CLAMP_TOLERANCE};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub gap: Operator,
    pub min_eigenvalue: f64,
}

fn require_positive_power(q: f64) -> Result<()> {
    if q.is_finite() && q > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidPower(q))
    }
}

fn require_psd(x: &Operator) -> Result<()> {
    let min = min_eigenvalue(x);
    if min < -CLAMP_TOLERANCE * x.op_norm().max(1.0) {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    Ok(())
}

fn power(x: &Operator, q: f64) -> Result<Operator> {
    if q == 1.0 { Ok(x.clone()) } else { psd_power(x, q) }
}

/// `E(x^q) − E(x)^q` and its smallest eigenvalue.
pub fn jensen_gap(x: &Operator, spec: &SubalgebraSpec, q: f64) -> Result<GapReport> {
    require_positive_power(q)?;
    require_psd(x)?;
    let outer = cond_exp(&power(x, q)?, spec)?;
    // E(x)^q lies in the subalgebra; projecting it again drops eigensolver
    // leakage outside it.
    let inner = cond_exp(&power(&cond_exp(x, spec)?, q)?, spec)?;
    let gap = (&outer - &inner).hermitian_part();
    let min_eigenvalue = min_eigenvalue(&gap);
    Ok(GapReport { gap, min_eigenvalue })
}

/// `B^r − A^r` and its smallest eigenvalue, for `0 <= A <= B`.
pub fn monotonicity_gap(a: &Operator, b: &Operator, r: f64) -> Result<GapReport> {
    require_positive_power(r)?;
    require_psd(a)?;
    require_psd(&(b - a))?;
    let gap = (&power(b, r)? - &power(a, r)?).hermitian_part();
    let min_eigenvalue = min_eigenvalue(&gap);
    Ok(GapReport { gap, min_eigenvalue })
}

/// Result of a seeded search for a negative gap.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViolationSearch<W> {
    /// Most negative gap eigenvalue seen.
    pub min_eigenvalue: f64,
    pub witness: W,
    pub trials_used: usize,
    /// Trial index at which the gap first fell below `-threshold`.
    pub found_at: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityWitness {
    pub a: Operator,
    pub b: Operator,
}

fn search<W>(
    trials: usize,
    threshold: f64,
    mut draw: impl FnMut(usize) -> Result<(f64, W)>,
) -> Result<ViolationSearch<W>> {
    if trials == 0 {
        return Err(Error::OutOfRange("at least one trial is required".into()));
    }
    let (mut best, mut witness) = draw(0)?;
    let mut used = 1;
    let mut found_at = (best < -threshold).then_some(0);
    while found_at.is_none() && used < trials {
        let (m, w) = draw(used)?;
        if m < best {
            best = m;
            witness = w;
        }
        if m < -threshold {
            found_at = Some(used);
        }
        used += 1;
    }
    Ok(ViolationSearch { min_eigenvalue: best, witness, trials_used: used, found_at })
}

/// Samples PSD `x` until `E(x^q) − E(x)^q` has an eigenvalue below `-threshold`.
pub fn find_jensen_violation(
    spec: &SubalgebraSpec,
    q: f64,
    trials: usize,
    seed: u64,
    threshold: f64,
) -> Result<ViolationSearch<Operator>> {
    let mut rng = seeded_rng(seed);
    let dim = spec.dim();
    search(trials, threshold, |_| {
        let x = random_psd(dim, &mut rng);
        let g = jensen_gap(&x, spec, q)?;
        Ok((g.min_eigenvalue, x))
    })
}

/// Samples `A >= 0` and `B = A + v v*` until `B^r − A^r` has an eigenvalue
/// below `-threshold`.
pub fn find_monotonicity_violation(
    dim: usize,
    r: f64,
    trials: usize,
    seed: u64,
    threshold: f64,
) -> Result<ViolationSearch<MonotonicityWitness>> {
    let mut rng = seeded_rng(seed);
    search(trials, threshold, |_| {
        let a = random_psd(dim, &mut rng);
        let v: Vec<_> = (0..dim).map(|_| complex_gaussian(&mut rng)).collect();
        let bump = Operator::new(nalgebra::DMatrix::from_fn(dim, dim, |i, j| v[i] * v[j].conj()))?;
        let b = (&a + &bump).hermitian_part();
        let g = monotonicity_gap(&a, &b, r)?;
        Ok((g.min_eigenvalue, MonotonicityWitness { a, b }))
    })
}
