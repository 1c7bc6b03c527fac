//! Seeded random operators: Gaussian Hermitian, Wishart-type PSD, Haar
//! unitaries, orthogonal projection families and adapted positive sequences.

use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::operator::Operator;
use crate::error::{Error, Result};
use crate::expectation::{project_adapted, Filtration, Lag, OperatorSequence};

/// Deterministic generator used throughout the crate.
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` derived from `seed`.
pub fn seeded_stream(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Standard complex Gaussian `(a + ib)/√2` with `a, b ~ N(0, 1)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator {
    let mut m = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            m[(i, j)] = complex_gaussian(rng);
        }
    }
    Operator::from_matrix_unchecked(m)
}

/// `(G + G*) / 2`.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator {
    gaussian_matrix(dim, rng).hermitian_part()
}

/// `Z* Z` with Gaussian `Z`.
pub fn random_psd<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator {
    let z = gaussian_matrix(dim, rng);
    (&z.adjoint() * &z).hermitian_part()
}

/// Haar unitary: QR of a Gaussian matrix with the phases of `R`'s diagonal
/// moved into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator {
    let g = gaussian_matrix(dim, rng).into_matrix();
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    Operator::from_matrix_unchecked(q)
}

/// `count` mutually orthogonal projections whose ranks partition `dim` as
/// evenly as possible, so that they sum to the identity.
pub fn random_projection_family<R: Rng + ?Sized>(
    dim: usize,
    count: usize,
    rng: &mut R,
) -> Result<Vec<Operator>> {
    if count == 0 || count > dim {
        return Err(Error::OutOfRange(format!(
            "projection family needs 1 <= count <= dim, got count={count}, dim={dim}"
        )));
    }
    let u = random_unitary(dim, rng).into_matrix();
    let mut out = Vec::with_capacity(count);
    let mut start = 0;
    for k in 0..count {
        let rank = dim / count + usize::from(k < dim % count);
        let cols = u.columns(start, rank);
        let p = cols * cols.adjoint();
        out.push(Operator::from_matrix_unchecked(p).hermitian_part());
        start += rank;
    }
    Ok(out)
}

pub fn random_positive_sequence<R: Rng + ?Sized>(
    dim: usize,
    len: usize,
    rng: &mut R,
) -> Result<OperatorSequence> {
    let items = (0..len).map(|_| random_psd(dim, rng)).collect();
    OperatorSequence::positive(items)
}

/// What [`sample`] should produce.
#[derive(Clone, Debug)]
pub enum SampleKind {
    Hermitian,
    Psd,
    Unitary,
    ProjectionFamily { count: usize },
    AdaptedPositive { len: usize, filtration: Filtration, lag: Lag },
}

/// Kind names accepted by [`SampleKind::from_str`]; the parametrized kinds
/// get default parameters that callers then override.
impl FromStr for SampleKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hermitian" => Ok(SampleKind::Hermitian),
            "psd" => Ok(SampleKind::Psd),
            "unitary" => Ok(SampleKind::Unitary),
            "projection-family" => Ok(SampleKind::ProjectionFamily { count: 1 }),
            other => Err(Error::UnknownSampleKind(other.to_string())),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Sample {
    Operator(Operator),
    Sequence(OperatorSequence),
}

impl Sample {
    pub fn into_operator(self) -> Option<Operator> {
        match self {
            Sample::Operator(x) => Some(x),
            Sample::Sequence(_) => None,
        }
    }

    pub fn into_sequence(self) -> Option<OperatorSequence> {
        match self {
            Sample::Sequence(s) => Some(s),
            Sample::Operator(_) => None,
        }
    }
}

/// Deterministic sample for fixed `(kind, dim, seed)`.
pub fn sample(kind: &SampleKind, dim: usize, seed: u64) -> Result<Sample> {
    if dim == 0 {
        return Err(Error::EmptyDimension);
    }
    let mut rng = seeded_rng(seed);
    Ok(match kind {
        SampleKind::Hermitian => Sample::Operator(random_hermitian(dim, &mut rng)),
        SampleKind::Psd => Sample::Operator(random_psd(dim, &mut rng)),
        SampleKind::Unitary => Sample::Operator(random_unitary(dim, &mut rng)),
        SampleKind::ProjectionFamily { count } => Sample::Sequence(OperatorSequence::new(
            random_projection_family(dim, *count, &mut rng)?,
        )?),
        SampleKind::AdaptedPositive { len, filtration, lag } => {
            if filtration.dim() != dim {
                return Err(Error::DimensionMismatch { expected: filtration.dim(), found: dim });
            }
            let raw = random_positive_sequence(dim, *len, &mut rng)?;
            Sample::Sequence(project_adapted(&raw, filtration, *lag)?)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcore::spectral::min_eigenvalue;

    #[test]
    fn unitary_sample_is_unitary() {
        let u = sample(&SampleKind::Unitary, 4, 7).unwrap().into_operator().unwrap();
        let resid = (&(&u.adjoint() * &u) - &Operator::identity(4)).op_norm();
        assert!(resid <= 1e-10, "residual {resid}");
    }

    #[test]
    fn psd_sample_is_psd() {
        let a = sample(&SampleKind::Psd, 3, 1).unwrap().into_operator().unwrap();
        assert!(min_eigenvalue(&a) >= 0.0);
    }

    #[test]
    fn projection_family_axioms() {
        let fam = sample(&SampleKind::ProjectionFamily { count: 4 }, 4, 2)
            .unwrap()
            .into_sequence()
            .unwrap();
        let items = fam.items();
        for (i, r) in items.iter().enumerate() {
            assert!((&(r * r) - r).op_norm() < 1e-10);
            assert!((r - &r.adjoint()).op_norm() < 1e-12);
            for (j, s) in items.iter().enumerate() {
                if i != j {
                    assert!((r * s).op_norm() < 1e-10);
                }
            }
        }
        let total = items.iter().skip(1).fold(items[0].clone(), |acc, r| &acc + r);
        assert!((&total - &Operator::identity(4)).op_norm() < 1e-10);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        for kind in [SampleKind::Hermitian, SampleKind::Psd, SampleKind::Unitary] {
            let a = sample(&kind, 5, 99).unwrap().into_operator().unwrap();
            let b = sample(&kind, 5, 99).unwrap().into_operator().unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn unknown_kind_rejected() {
        assert_eq!(
            "orthogonal".parse::<SampleKind>().unwrap_err(),
            Error::UnknownSampleKind("orthogonal".into())
        );
    }
}
