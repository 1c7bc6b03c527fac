use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A `d x d` complex matrix regarded as an element of the tracial algebra
/// `M_d` with normalized trace.
///
/// Entries are always finite and `d >= 1`.
#[derive(Clone, PartialEq)]
pub struct Operator {
    m: DMatrix<Complex64>,
}

impl Operator {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        if m.nrows() == 0 {
            return Err(Error::EmptyDimension);
        }
        for col in 0..m.ncols() {
            for row in 0..m.nrows() {
                let z = m[(row, col)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row, col });
                }
            }
        }
        Ok(Self { m })
    }

    /// Wraps a matrix produced internally from finite operands.
    pub(crate) fn from_matrix_unchecked(m: DMatrix<Complex64>) -> Self {
        debug_assert!(m.is_square() && m.nrows() > 0);
        Self { m }
    }

    /// Builds an operator from row-major entries.
    pub fn from_row_slice(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        if entries.len() != dim * dim {
            return Err(Error::LengthMismatch(format!(
                "expected {} entries for dimension {dim}, found {}",
                dim * dim,
                entries.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    /// Builds an operator from real row-major entries.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::NotSquare { rows: dim, cols: row.len() });
            }
            entries.extend(row.iter().map(|&v| Complex64::new(v, 0.0)));
        }
        Self::from_row_slice(dim, &entries)
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim > 0, "operator dimension must be at least 1");
        Self { m: DMatrix::identity(dim, dim) }
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "operator dimension must be at least 1");
        Self { m: DMatrix::zeros(dim, dim) }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::EmptyDimension);
        }
        let d = diag.len();
        let mut m = DMatrix::zeros(d, d);
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self { m: self.m.adjoint() }
    }

    /// Normalized trace `tr(x) / d`, so that the identity has trace 1.
    pub fn trace(&self) -> Complex64 {
        self.m.trace() / self.dim() as f64
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { m: &self.m * Complex64::new(c, 0.0) }
    }

    pub fn scale_complex(&self, c: Complex64) -> Self {
        Self { m: &self.m * c }
    }

    /// `(x + x*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let mut m = &self.m + self.m.adjoint();
        m.scale_mut(0.5);
        Self { m }
    }

    /// Largest singular value.
    pub fn op_norm(&self) -> f64 {
        self.m
            .clone()
            .singular_values()
            .iter()
            .fold(0.0_f64, |acc, &s| acc.max(s))
    }

    /// Unnormalized Frobenius norm; an upper bound for [`Operator::op_norm`].
    pub fn frobenius_norm(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
    }

    /// Operator-norm distance to `x*`.
    pub fn hermiticity_residual(&self) -> f64 {
        Operator::from_matrix_unchecked(&self.m - self.m.adjoint()).op_norm()
    }

    /// `x* y x`.
    pub fn conjugate_by(&self, y: &Operator) -> Operator {
        Operator::from_matrix_unchecked(y.m.adjoint() * &self.m * &y.m)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Operator) -> Operator {
        Operator::from_matrix_unchecked(self.m.kronecker(&other.m))
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Operator(dim={}) {}", self.dim(), self.m)
    }
}

impl Add<&Operator> for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in operator sum");
        Operator { m: &self.m + &rhs.m }
    }
}

impl Sub<&Operator> for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in operator difference");
        Operator { m: &self.m - &rhs.m }
    }
}

impl Mul<&Operator> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in operator product");
        Operator { m: &self.m * &rhs.m }
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator { m: -&self.m }
    }
}

/// Serialized form: `{"dim": d, "entries": [[re, im], ...]}` in row-major order.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OperatorRepr {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

impl Serialize for Operator {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let d = self.dim();
        let mut entries = Vec::with_capacity(d * d);
        for row in 0..d {
            for col in 0..d {
                let z = self.m[(row, col)];
                entries.push([z.re, z.im]);
            }
        }
        OperatorRepr { dim: d, entries }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Operator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = OperatorRepr::deserialize(deserializer)?;
        let entries: Vec<Complex64> =
            repr.entries.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        Operator::from_row_slice(repr.dim, &entries).map_err(serde::de::Error::custom)
    }
}

/// The algebra `M_d` together with its normalized trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TracialSpace {
    dim: usize,
}

impl TracialSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn identity(&self) -> Operator {
        Operator::identity(self.dim)
    }

    pub fn trace(&self, x: &Operator) -> Result<Complex64> {
        self.check(x)?;
        Ok(x.trace())
    }

    pub fn check(&self, x: &Operator) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.dim() });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_square_and_non_finite() {
        let m = DMatrix::<Complex64>::zeros(2, 3);
        assert_eq!(Operator::new(m), Err(Error::NotSquare { rows: 2, cols: 3 }));
        let mut m = DMatrix::<Complex64>::zeros(2, 2);
        m[(1, 0)] = Complex64::new(f64::NAN, 0.0);
        assert_eq!(Operator::new(m), Err(Error::NonFinite { row: 1, col: 0 }));
        assert_eq!(Operator::from_real_diagonal(&[]), Err(Error::EmptyDimension));
    }

    #[test]
    fn normalized_trace_of_identity_is_one() {
        for d in 1..6 {
            assert_eq!(Operator::identity(d).trace(), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn serde_round_trip() {
        let x = Operator::from_row_slice(
            2,
            &[
                Complex64::new(1.0, 0.5),
                Complex64::new(-2.0, 0.0),
                Complex64::new(0.0, 3.25),
                Complex64::new(4.0, -1.0),
            ],
        )
        .unwrap();
        let text = serde_json::to_string(&x).unwrap();
        assert_eq!(text, r#"{"dim":2,"entries":[[1.0,0.5],[-2.0,0.0],[0.0,3.25],[4.0,-1.0]]}"#);
        let back: Operator = serde_json::from_str(&text).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<Operator>(r#"{"dim":2,"entries":[[1,0]]}"#).is_err());
    }
}
