//! Spectral routines: Hermitian eigendecomposition, functional calculus,
//! absolute values, fractional powers and Schatten norms under the
//! normalized trace.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::exponent::Exponent;
use super::operator::Operator;
use crate::error::{Error, Result};

/// Relative tolerance on `‖h - h*‖_∞` accepted before symmetrizing.
pub const HERMITIAN_TOLERANCE: f64 = 1e-8;

/// Relative clamp for eigenvalues in `[-ε, 0)`, `ε = 1e-10 · max(1, ‖x‖_∞)`.
pub const CLAMP_TOLERANCE: f64 = 1e-10;

/// Eigendecomposition `h = U diag(λ) U*` with ascending eigenvalues.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub transition: Operator,
}

impl HermitianEigen {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("dimension >= 1")
    }

    /// Largest absolute eigenvalue, i.e. `‖h‖_∞`.
    pub fn spectral_radius(&self) -> f64 {
        self.min_eigenvalue().abs().max(self.max_eigenvalue().abs())
    }

    /// `U diag(f(λ)) U*`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Operator {
        let u = self.transition.matrix();
        let d = u.nrows();
        let mut scaled = u.clone();
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let v = Complex64::new(f(lambda), 0.0);
            for i in 0..d {
                scaled[(i, j)] *= v;
            }
        }
        let out = scaled * u.adjoint();
        Operator::from_matrix_unchecked(out).hermitian_part()
    }

    pub fn reassemble(&self) -> Operator {
        self.map(|l| l)
    }
}

fn hermitian_residual_check(h: &Operator) -> Result<()> {
    let diff = Operator::from_matrix_unchecked(h.matrix() - h.matrix().adjoint());
    let scale = 1.0_f64.max(h.frobenius_norm());
    let tol = HERMITIAN_TOLERANCE * scale;
    // Frobenius bounds the operator norm from above, so the cheap test suffices
    // for acceptance.
    if diff.frobenius_norm() <= tol {
        return Ok(());
    }
    let residual = diff.op_norm();
    if residual <= HERMITIAN_TOLERANCE * 1.0_f64.max(h.op_norm()) {
        Ok(())
    } else {
        Err(Error::NotHermitian { residual })
    }
}

/// Eigendecomposition of a Hermitian operator. The input is symmetrized
/// after the Hermiticity check.
pub fn hermitian_eig(h: &Operator) -> Result<HermitianEigen> {
    hermitian_residual_check(h)?;
    Ok(eig_symmetrized(h))
}

pub(crate) fn eig_symmetrized(h: &Operator) -> HermitianEigen {
    let sym = h.hermitian_part();
    let eig = SymmetricEigen::new(sym.into_matrix());
    let d = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = DMatrix::<Complex64>::zeros(d, d);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    HermitianEigen { eigenvalues, transition: Operator::from_matrix_unchecked(vectors) }
}

/// Smallest eigenvalue of the Hermitian part of `h`.
pub fn min_eigenvalue(h: &Operator) -> f64 {
    eig_symmetrized(h).min_eigenvalue()
}

/// Eigendecomposition of a PSD operator with slightly negative eigenvalues
/// clamped to zero.
pub(crate) fn psd_eig(a: &Operator) -> Result<HermitianEigen> {
    let mut eig = hermitian_eig(a)?;
    let eps = CLAMP_TOLERANCE * 1.0_f64.max(eig.spectral_radius());
    let min = eig.min_eigenvalue();
    if min < -eps {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    for l in eig.eigenvalues.iter_mut() {
        if *l < 0.0 {
            *l = 0.0;
        }
    }
    Ok(eig)
}

/// Checks positivity up to the clamp tolerance.
pub fn is_psd(a: &Operator) -> bool {
    psd_eig(a).is_ok()
}

/// `a^r` for PSD `a` and `r > 0`.
pub fn psd_power(a: &Operator, r: f64) -> Result<Operator> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidPower(r));
    }
    let eig = psd_eig(a)?;
    Ok(eig.map(|l| if l == 0.0 { 0.0 } else { l.powf(r) }))
}

/// `|x| = (x* x)^{1/2}`, computed as `V Σ V*` from a singular value
/// decomposition `x = U Σ V*`.
pub fn abs_op(x: &Operator) -> Operator {
    let svd = x.matrix().clone().svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let d = x.dim();
    let mut weighted = v_t.adjoint();
    for (j, &s) in svd.singular_values.iter().enumerate() {
        let s = Complex64::new(s, 0.0);
        for i in 0..d {
            weighted[(i, j)] *= s;
        }
    }
    Operator::from_matrix_unchecked(weighted * v_t).hermitian_part()
}

/// Singular values in no particular order.
pub fn singular_values(x: &Operator) -> Vec<f64> {
    x.matrix().clone().singular_values().iter().copied().collect()
}

/// Generalized mean `(mean_k v_k^p)^{1/p}` over nonnegative values, `max` at `p = ∞`.
pub(crate) fn power_mean(values: &[f64], p: Exponent) -> f64 {
    let top = values.iter().fold(0.0_f64, |acc, &v| acc.max(v));
    match p.finite() {
        None => top,
        Some(_) if top == 0.0 => 0.0,
        Some(p) => {
            let mean = values.iter().map(|&v| (v / top).powf(p)).sum::<f64>() / values.len() as f64;
            top * mean.powf(1.0 / p)
        }
    }
}

/// Schatten norm under the normalized trace: `‖x‖_p = τ(|x|^p)^{1/p}`,
/// the operator norm at `p = ∞`. Multiply by `d^{1/p}` for the
/// unnormalized convention.
pub fn schatten_norm(x: &Operator, p: Exponent) -> f64 {
    power_mean(&singular_values(x), p)
}

/// Schatten norm of a Hermitian operator from its eigenvalues.
pub fn hermitian_schatten_norm(h: &Operator, p: Exponent) -> f64 {
    let eig = eig_symmetrized(h);
    let abs: Vec<f64> = eig.eigenvalues.iter().map(|l| l.abs()).collect();
    power_mean(&abs, p)
}

/// Same as [`schatten_norm`] but rejects `p < 1` given as a raw float.
pub fn schatten_norm_f64(x: &Operator, p: f64) -> Result<f64> {
    Ok(schatten_norm(x, Exponent::new(p)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn eig_of_identity_and_diagonal() {
        let e = hermitian_eig(&Operator::identity(3)).unwrap();
        assert_eq!(e.eigenvalues.len(), 3);
        for l in &e.eigenvalues {
            assert!((l - 1.0).abs() < 1e-14);
        }
        let e = hermitian_eig(&Operator::from_real_diagonal(&[3.0, -4.0]).unwrap()).unwrap();
        assert!((e.eigenvalues[0] + 4.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let x = Operator::from_row_slice(2, &[c(1.0), c(2.0), c(0.0), c(1.0)]).unwrap();
        match hermitian_eig(&x) {
            Err(Error::NotHermitian { residual }) => assert!((residual - 2.0).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn abs_examples() {
        let minus = Operator::identity(3).scale(-1.0);
        assert!((&abs_op(&minus) - &Operator::identity(3)).max_abs_entry() < 1e-14);
        let x = Operator::from_real_diagonal(&[3.0, -4.0]).unwrap();
        let expected = Operator::from_real_diagonal(&[3.0, 4.0]).unwrap();
        assert!((&abs_op(&x) - &expected).max_abs_entry() < 1e-13);
    }

    #[test]
    fn power_examples() {
        let i = Operator::identity(4);
        for r in [0.25, 0.5, 1.0, 3.0] {
            assert!((&psd_power(&i, r).unwrap() - &i).max_abs_entry() < 1e-14);
        }
        let a = Operator::from_real_diagonal(&[4.0, 9.0]).unwrap();
        let got = psd_power(&a, 0.5).unwrap();
        let expected = Operator::from_real_diagonal(&[2.0, 3.0]).unwrap();
        assert!((&got - &expected).max_abs_entry() < 1e-14);
    }

    #[test]
    fn power_rejects_indefinite_and_bad_exponent() {
        let a = Operator::from_real_diagonal(&[1.0, -0.5]).unwrap();
        assert!(matches!(psd_power(&a, 0.5), Err(Error::NotPositive { .. })));
        // Negative drift within the clamp is accepted and zeroed.
        let a = Operator::from_real_diagonal(&[1.0, -1e-12]).unwrap();
        let r = psd_power(&a, 0.5).unwrap();
        assert_eq!(r.entry(1, 1), c(0.0));
        assert!(matches!(psd_power(&Operator::identity(2), 0.0), Err(Error::InvalidPower(_))));
    }

    #[test]
    fn schatten_examples() {
        for p in [1.0, 1.5, 2.0, 7.0, f64::INFINITY] {
            let p = Exponent::new(p).unwrap();
            assert!((schatten_norm(&Operator::identity(5), p) - 1.0).abs() < 1e-15);
        }
        let x = Operator::from_real_diagonal(&[2.0, 0.0]).unwrap();
        assert!((schatten_norm(&x, Exponent::ONE) - 1.0).abs() < 1e-15);
        assert!((schatten_norm(&x, Exponent::INFINITY) - 2.0).abs() < 1e-15);
        assert!(schatten_norm_f64(&x, 0.5).is_err());
    }

    #[test]
    fn zero_operator_norms() {
        let z = Operator::zeros(3);
        assert_eq!(schatten_norm(&z, Exponent::TWO), 0.0);
        assert_eq!(schatten_norm(&z, Exponent::INFINITY), 0.0);
    }
}
