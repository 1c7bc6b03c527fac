//! Subalgebras of `M_d`, increasing filtrations, and the trace-preserving
//! conditional expectations onto them.
//!
//! Indexing convention for sequences: the item at position `i` stands for
//! time `n = i + lag`. It is adapted when it lies in level `i + lag`, and
//! the Stein-type checkers apply `E_{n - lag} = E_i` to it. With `lag = 0`
//! this is the `E_n(x_n)` form; with `lag = 1` the predictable `E_{n-1}(x_n)`
//! form.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::opcore::sample::{random_psd, seeded_rng, gaussian_matrix};
use crate::opcore::{is_psd, min_eigenvalue, schatten_norm, Exponent, Operator};

/// Tolerance for membership and adaptedness tests.
pub const MEMBERSHIP_TOLERANCE: f64 = 1e-10;

/// A unital *-subalgebra `N ⊆ M_d` with an explicit conditional expectation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SubalgebraSpec {
    /// Block-diagonal matrices for a partition of `0..d` into contiguous
    /// blocks of the given sizes.
    Pinching { block_sizes: Vec<usize> },
    /// `M_{d_1} ⊗ … ⊗ M_{d_k} ⊗ 1 ⊗ … ⊗ 1`: the leading `retained` factors of
    /// `M_{d_1} ⊗ … ⊗ M_{d_m}`.
    TensorFactor { local_dims: Vec<usize>, retained: usize },
    /// Block-diagonal matrices with `block_dim`-sized diagonal blocks that are
    /// constant over each cell of a partition of the block indices. This is
    /// `L_∞(Ω, F) ⊗ M_{block_dim}` for a sample space realized by replicated
    /// atoms.
    CellAverage { block_dim: usize, cells: Vec<Vec<usize>> },
}

impl SubalgebraSpec {
    pub fn pinching(block_sizes: Vec<usize>) -> Result<Self> {
        let s = SubalgebraSpec::Pinching { block_sizes };
        s.validate()?;
        Ok(s)
    }

    pub fn tensor_factor(local_dims: Vec<usize>, retained: usize) -> Result<Self> {
        let s = SubalgebraSpec::TensorFactor { local_dims, retained };
        s.validate()?;
        Ok(s)
    }

    pub fn cell_average(block_dim: usize, cells: Vec<Vec<usize>>) -> Result<Self> {
        let s = SubalgebraSpec::CellAverage { block_dim, cells };
        s.validate()?;
        Ok(s)
    }

    /// The whole algebra `M_d`.
    pub fn full(dim: usize) -> Result<Self> {
        Self::pinching(vec![dim])
    }

    /// The scalars `C·1`.
    pub fn scalars(dim: usize) -> Result<Self> {
        Self::tensor_factor(vec![dim], 0)
    }

    /// Diagonal matrices.
    pub fn diagonal(dim: usize) -> Result<Self> {
        Self::pinching(vec![1; dim])
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SubalgebraSpec::Pinching { block_sizes } => {
                if block_sizes.is_empty() || block_sizes.contains(&0) {
                    return Err(Error::InvalidSubalgebra(
                        "pinching blocks must be nonempty and cover 0..d".into(),
                    ));
                }
            }
            SubalgebraSpec::TensorFactor { local_dims, retained } => {
                if local_dims.is_empty() || local_dims.contains(&0) {
                    return Err(Error::InvalidSubalgebra(
                        "tensor factors must have positive local dimensions".into(),
                    ));
                }
                if *retained > local_dims.len() {
                    return Err(Error::InvalidSubalgebra(format!(
                        "retained={retained} exceeds the number of factors {}",
                        local_dims.len()
                    )));
                }
            }
            SubalgebraSpec::CellAverage { block_dim, cells } => {
                if *block_dim == 0 {
                    return Err(Error::InvalidSubalgebra("block_dim must be positive".into()));
                }
                let blocks: usize = cells.iter().map(Vec::len).sum();
                let mut seen = vec![false; blocks];
                for cell in cells {
                    if cell.is_empty() {
                        return Err(Error::InvalidSubalgebra("empty cell".into()));
                    }
                    for &b in cell {
                        if b >= blocks || seen[b] {
                            return Err(Error::InvalidSubalgebra(format!(
                                "cells must partition 0..{blocks}; index {b} is invalid or repeated"
                            )));
                        }
                        seen[b] = true;
                    }
                }
                if blocks == 0 {
                    return Err(Error::InvalidSubalgebra("no cells".into()));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match self {
            SubalgebraSpec::Pinching { block_sizes } => block_sizes.iter().sum(),
            SubalgebraSpec::TensorFactor { local_dims, .. } => local_dims.iter().product(),
            SubalgebraSpec::CellAverage { block_dim, cells } => {
                block_dim * cells.iter().map(Vec::len).sum::<usize>()
            }
        }
    }

    /// Whether `self ⊆ other` as algebras (same variant only).
    pub fn is_contained_in(&self, other: &SubalgebraSpec) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        match (self, other) {
            (
                SubalgebraSpec::Pinching { block_sizes: fine },
                SubalgebraSpec::Pinching { block_sizes: coarse },
            ) => {
                // Every block boundary of the coarse partition is a boundary of the fine one.
                let bounds = |sizes: &[usize]| {
                    sizes
                        .iter()
                        .scan(0, |acc, &s| {
                            *acc += s;
                            Some(*acc)
                        })
                        .collect::<Vec<_>>()
                };
                let fine = bounds(fine);
                bounds(coarse).iter().all(|b| fine.contains(b))
            }
            (
                SubalgebraSpec::TensorFactor { local_dims: a, retained: ra },
                SubalgebraSpec::TensorFactor { local_dims: b, retained: rb },
            ) => a == b && ra <= rb,
            (
                SubalgebraSpec::CellAverage { block_dim: da, cells: coarse },
                SubalgebraSpec::CellAverage { block_dim: db, cells: fine },
            ) => {
                // A larger algebra has a finer partition: each of its cells sits
                // inside one cell of the smaller algebra.
                da == db
                    && fine.iter().all(|f| {
                        coarse.iter().any(|c| f.iter().all(|b| c.contains(b)))
                    })
            }
            _ => false,
        }
    }

    /// Membership test `E(x) = x` in operator norm.
    pub fn contains(&self, x: &Operator, tol: f64) -> Result<bool> {
        let e = cond_exp(x, self)?;
        Ok((&e - x).op_norm() <= tol)
    }
}

fn check_dim(x: &Operator, spec: &SubalgebraSpec) -> Result<()> {
    if x.dim() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), found: x.dim() });
    }
    Ok(())
}

/// The trace-preserving conditional expectation `E_N(x)`.
pub fn cond_exp(x: &Operator, spec: &SubalgebraSpec) -> Result<Operator> {
    spec.validate()?;
    check_dim(x, spec)?;
    let m = x.matrix();
    let d = x.dim();
    let out = match spec {
        SubalgebraSpec::Pinching { block_sizes } => {
            let mut block_of = Vec::with_capacity(d);
            for (b, &s) in block_sizes.iter().enumerate() {
                block_of.extend(std::iter::repeat_n(b, s));
            }
            DMatrix::from_fn(d, d, |i, j| {
                if block_of[i] == block_of[j] {
                    m[(i, j)]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
        }
        SubalgebraSpec::TensorFactor { local_dims, retained } => {
            let kept: usize = local_dims[..*retained].iter().product();
            let traced: usize = local_dims[*retained..].iter().product();
            let mut reduced = DMatrix::<Complex64>::zeros(kept, kept);
            for a in 0..kept {
                for a2 in 0..kept {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for b in 0..traced {
                        acc += m[(a * traced + b, a2 * traced + b)];
                    }
                    reduced[(a, a2)] = acc / traced as f64;
                }
            }
            DMatrix::from_fn(d, d, |i, j| {
                let (a, b) = (i / traced, i % traced);
                let (a2, b2) = (j / traced, j % traced);
                if b == b2 {
                    reduced[(a, a2)]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
        }
        SubalgebraSpec::CellAverage { block_dim, cells } => {
            let k = *block_dim;
            let mut out = DMatrix::<Complex64>::zeros(d, d);
            for cell in cells {
                let mut avg = DMatrix::<Complex64>::zeros(k, k);
                for &b in cell {
                    avg += m.view((b * k, b * k), (k, k));
                }
                avg /= Complex64::new(cell.len() as f64, 0.0);
                for &b in cell {
                    out.view_mut((b * k, b * k), (k, k)).copy_from(&avg);
                }
            }
            out
        }
    };
    Ok(Operator::from_matrix_unchecked(out))
}

/// A random element of the subalgebra: `E(G)` for Gaussian `G`.
pub fn random_element<R: rand::Rng + ?Sized>(spec: &SubalgebraSpec, rng: &mut R) -> Result<Operator> {
    cond_exp(&gaussian_matrix(spec.dim(), rng), spec)
}

/// Worst observed violation of each conditional-expectation axiom.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AxiomResiduals {
    pub trials: usize,
    /// `‖E(E(x)) − E(x)‖_∞`.
    pub projection: f64,
    /// `‖E(a x b) − a E(x) b‖_∞` for `a, b ∈ N`.
    pub bimodule: f64,
    /// `|τ(E(x)) − τ(x)|`.
    pub trace: f64,
    /// `max(0, −λ_min(E(y)))` over PSD samples `y`.
    pub positivity: f64,
    /// `max(0, ‖E(x)‖_p − ‖x‖_p)` for `p = 1, 2, 3, ∞`.
    pub contractivity: [f64; 4],
    /// `‖E(x*) − E(x)*‖_∞`.
    pub adjoint: f64,
}

pub const CONTRACTIVITY_EXPONENTS: [f64; 4] = [1.0, 2.0, 3.0, f64::INFINITY];

impl AxiomResiduals {
    pub fn max_residual(&self) -> f64 {
        self.contractivity.iter().fold(
            self.projection
                .max(self.bimodule)
                .max(self.trace)
                .max(self.positivity)
                .max(self.adjoint),
            |acc, &c| acc.max(c),
        )
    }

    fn absorb(&mut self, other: &AxiomResiduals) {
        self.trials += other.trials;
        self.projection = self.projection.max(other.projection);
        self.bimodule = self.bimodule.max(other.bimodule);
        self.trace = self.trace.max(other.trace);
        self.positivity = self.positivity.max(other.positivity);
        self.adjoint = self.adjoint.max(other.adjoint);
        for (a, b) in self.contractivity.iter_mut().zip(other.contractivity) {
            *a = a.max(b);
        }
    }
}

/// Samples `trials` operators (and subalgebra elements `a, b`) and records
/// the largest residual of every axiom.
pub fn axiom_residuals(spec: &SubalgebraSpec, trials: usize, seed: u64) -> Result<AxiomResiduals> {
    spec.validate()?;
    if trials == 0 {
        return Err(Error::OutOfRange("axiom check needs trials >= 1".into()));
    }
    let d = spec.dim();
    let mut rng = seeded_rng(seed);
    let mut out = AxiomResiduals::default();
    for _ in 0..trials {
        let x = gaussian_matrix(d, &mut rng);
        let a = random_element(spec, &mut rng)?;
        let b = random_element(spec, &mut rng)?;
        let y = random_psd(d, &mut rng);
        out.absorb(&axiom_residuals_at(spec, &x, &a, &b, &y)?);
    }
    Ok(out)
}

/// Axiom residuals for one explicit input; `a`, `b` must lie in the subalgebra
/// and `y` must be PSD.
pub fn axiom_residuals_at(
    spec: &SubalgebraSpec,
    x: &Operator,
    a: &Operator,
    b: &Operator,
    y: &Operator,
) -> Result<AxiomResiduals> {
    let ex = cond_exp(x, spec)?;
    let projection = (&cond_exp(&ex, spec)? - &ex).op_norm();
    let axb = &(a * x) * b;
    let bimodule = (&cond_exp(&axb, spec)? - &(&(a * &ex) * b)).op_norm();
    let trace = (ex.trace() - x.trace()).norm();
    let positivity = (-min_eigenvalue(&cond_exp(y, spec)?)).max(0.0);
    let mut contractivity = [0.0; 4];
    for (slot, p) in contractivity.iter_mut().zip(CONTRACTIVITY_EXPONENTS) {
        let p = Exponent::new(p)?;
        *slot = (schatten_norm(&ex, p) - schatten_norm(x, p)).max(0.0);
    }
    let adjoint = (&cond_exp(&x.adjoint(), spec)? - &ex.adjoint()).op_norm();
    Ok(AxiomResiduals { trials: 1, projection, bimodule, trace, positivity, contractivity, adjoint })
}

/// An increasing chain of subalgebras `M_0 ⊆ M_1 ⊆ …` of a common `M_d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FiltrationRepr", into = "FiltrationRepr")]
pub struct Filtration {
    levels: Vec<SubalgebraSpec>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FiltrationRepr {
    levels: Vec<SubalgebraSpec>,
}

impl TryFrom<FiltrationRepr> for Filtration {
    type Error = Error;
    fn try_from(r: FiltrationRepr) -> Result<Self> {
        Filtration::new(r.levels)
    }
}

impl From<Filtration> for FiltrationRepr {
    fn from(f: Filtration) -> Self {
        FiltrationRepr { levels: f.levels }
    }
}

impl Filtration {
    pub fn new(levels: Vec<SubalgebraSpec>) -> Result<Self> {
        let first = levels
            .first()
            .ok_or_else(|| Error::InvalidFiltration("a filtration needs at least one level".into()))?;
        let dim = first.dim();
        for (n, level) in levels.iter().enumerate() {
            level.validate()?;
            if level.dim() != dim {
                return Err(Error::InvalidFiltration(format!(
                    "level {n} acts on dimension {}, expected {dim}",
                    level.dim()
                )));
            }
        }
        for (n, pair) in levels.windows(2).enumerate() {
            if !pair[0].is_contained_in(&pair[1]) {
                return Err(Error::InvalidFiltration(format!(
                    "level {n} is not contained in level {}",
                    n + 1
                )));
            }
        }
        Ok(Self { levels })
    }

    pub fn dim(&self) -> usize {
        self.levels[0].dim()
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn levels(&self) -> &[SubalgebraSpec] {
        &self.levels
    }

    pub fn level(&self, n: usize) -> Result<&SubalgebraSpec> {
        self.levels.get(n).ok_or_else(|| {
            Error::LengthMismatch(format!("level {n} requested from a filtration of {} levels", self.len()))
        })
    }

    /// `E_n(x)`.
    pub fn expect(&self, n: usize, x: &Operator) -> Result<Operator> {
        cond_exp(x, self.level(n)?)
    }

    /// Extends the chain to `total` levels by repeating the top algebra.
    pub fn padded(&self, total: usize) -> Filtration {
        let mut levels = self.levels.clone();
        let top = levels.last().expect("nonempty").clone();
        while levels.len() < total {
            levels.push(top.clone());
        }
        Filtration { levels }
    }

    /// Largest `‖E_m(E_n(x)) − E_{min(m,n)}(x)‖_∞` over seeded Gaussian samples.
    pub fn tower_residual(&self, trials: usize, seed: u64) -> Result<f64> {
        let mut rng = seeded_rng(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..trials {
            let x = gaussian_matrix(self.dim(), &mut rng);
            let projected: Vec<Operator> =
                (0..self.len()).map(|n| self.expect(n, &x)).collect::<Result<_>>()?;
            for m in 0..self.len() {
                for (n, en) in projected.iter().enumerate() {
                    let lhs = self.expect(m, en)?;
                    worst = worst.max((&lhs - &projected[m.min(n)]).op_norm());
                }
            }
        }
        Ok(worst)
    }
}

/// Concrete filtration families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FiltrationKind {
    /// `d = 2^N`; level `n` pinches onto blocks of size `2^n`.
    DyadicPinching { dim: usize },
    /// Level `n` retains the first `n` tensor factors.
    Tensor { local_dims: Vec<usize> },
}

pub fn make_filtration(kind: &FiltrationKind) -> Result<Filtration> {
    match kind {
        FiltrationKind::DyadicPinching { dim } => {
            if *dim == 0 || !dim.is_power_of_two() {
                return Err(Error::InvalidFiltration(format!(
                    "dyadic pinching needs a power-of-two dimension, got {dim}"
                )));
            }
            let depth = dim.trailing_zeros() as usize;
            let levels = (0..=depth)
                .map(|n| SubalgebraSpec::pinching(vec![1 << n; dim >> n]))
                .collect::<Result<Vec<_>>>()?;
            Filtration::new(levels)
        }
        FiltrationKind::Tensor { local_dims } => {
            if local_dims.is_empty() || local_dims.contains(&0) {
                return Err(Error::InvalidFiltration(
                    "tensor filtration needs positive local dimensions".into(),
                ));
            }
            let levels = (0..=local_dims.len())
                .map(|n| SubalgebraSpec::tensor_factor(local_dims.clone(), n))
                .collect::<Result<Vec<_>>>()?;
            Filtration::new(levels)
        }
    }
}

/// Offset between an item's position and the level it must belong to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Lag {
    Zero,
    One,
}

impl Lag {
    pub fn as_usize(self) -> usize {
        match self {
            Lag::Zero => 0,
            Lag::One => 1,
        }
    }
}

impl TryFrom<u8> for Lag {
    type Error = String;
    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            0 => Ok(Lag::Zero),
            1 => Ok(Lag::One),
            other => Err(format!("lag must be 0 or 1, got {other}")),
        }
    }
}

impl From<Lag> for u8 {
    fn from(l: Lag) -> u8 {
        l.as_usize() as u8
    }
}

/// A finite, nonempty sequence of operators of a common dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SequenceRepr", into = "SequenceRepr")]
pub struct OperatorSequence {
    items: Vec<Operator>,
    positive: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SequenceRepr {
    dim: usize,
    positive: bool,
    items: Vec<Operator>,
}

impl TryFrom<SequenceRepr> for OperatorSequence {
    type Error = Error;
    fn try_from(r: SequenceRepr) -> Result<Self> {
        let seq = if r.positive { Self::positive(r.items)? } else { Self::new(r.items)? };
        if seq.dim() != r.dim {
            return Err(Error::DimensionMismatch { expected: r.dim, found: seq.dim() });
        }
        Ok(seq)
    }
}

impl From<OperatorSequence> for SequenceRepr {
    fn from(s: OperatorSequence) -> Self {
        SequenceRepr { dim: s.dim(), positive: s.positive, items: s.items }
    }
}

impl OperatorSequence {
    pub fn new(items: Vec<Operator>) -> Result<Self> {
        let first = items.first().ok_or(Error::EmptySequence)?;
        let dim = first.dim();
        for x in &items {
            if x.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: x.dim() });
            }
        }
        Ok(Self { items, positive: false })
    }

    /// A sequence whose items are verified PSD up to the clamp tolerance.
    pub fn positive(items: Vec<Operator>) -> Result<Self> {
        let mut seq = Self::new(items)?;
        for x in &seq.items {
            if !is_psd(x) {
                return Err(Error::NotPositive { min_eigenvalue: min_eigenvalue(x) });
            }
        }
        seq.positive = true;
        Ok(seq)
    }

    pub(crate) fn positive_unchecked(items: Vec<Operator>) -> Self {
        debug_assert!(!items.is_empty());
        Self { items, positive: true }
    }

    /// Marks the sequence positive after verifying every item.
    pub fn into_positive(self) -> Result<Self> {
        if self.positive {
            Ok(self)
        } else {
            Self::positive(self.items)
        }
    }

    pub fn constant(x: Operator, len: usize) -> Result<Self> {
        let positive = is_psd(&x);
        let mut seq = Self::new(vec![x; len])?;
        seq.positive = positive;
        Ok(seq)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.items[0].dim()
    }

    pub fn items(&self) -> &[Operator] {
        &self.items
    }

    pub fn into_items(self) -> Vec<Operator> {
        self.items
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    pub fn adjoint(&self) -> Self {
        Self { items: self.items.iter().map(Operator::adjoint).collect(), positive: self.positive }
    }

    /// `c · x_n` for `c >= 0` keeps positivity.
    pub fn scale(&self, c: f64) -> Self {
        Self {
            items: self.items.iter().map(|x| x.scale(c)).collect(),
            positive: self.positive && c >= 0.0,
        }
    }

    pub fn sum(&self) -> Operator {
        let mut acc = self.items[0].clone();
        for x in &self.items[1..] {
            acc = &acc + x;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.items.iter().all(|x| x.max_abs_entry() == 0.0)
    }

    /// Applies `E_i` to item `i`.
    pub fn expect_termwise(&self, filt: &Filtration) -> Result<Self> {
        self.check_against(filt, 0)?;
        let items = self
            .items
            .iter()
            .enumerate()
            .map(|(i, x)| filt.expect(i, x))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { items, positive: self.positive })
    }

    pub(crate) fn check_against(&self, filt: &Filtration, shift: usize) -> Result<()> {
        if filt.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: filt.dim(), found: self.dim() });
        }
        if self.len() + shift > filt.len() {
            return Err(Error::LengthMismatch(format!(
                "sequence of length {} with lag {shift} needs {} filtration levels, found {}",
                self.len(),
                self.len() + shift,
                filt.len()
            )));
        }
        Ok(())
    }
}

/// Result of [`is_adapted`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdaptedCheck {
    pub adapted: bool,
    pub residual: f64,
}

/// `max_i ‖E_{i+lag}(x_i) − x_i‖_∞ <= 1e-10`.
pub fn is_adapted(seq: &OperatorSequence, filt: &Filtration, lag: Lag) -> Result<AdaptedCheck> {
    let shift = lag.as_usize();
    seq.check_against(filt, shift)?;
    let mut residual: f64 = 0.0;
    for (i, x) in seq.items().iter().enumerate() {
        residual = residual.max((&filt.expect(i + shift, x)? - x).op_norm());
    }
    Ok(AdaptedCheck { adapted: residual <= MEMBERSHIP_TOLERANCE, residual })
}

/// `(E_{i+lag}(x_i))_i`, the nearest adapted sequence in the trace sense.
pub fn project_adapted(seq: &OperatorSequence, filt: &Filtration, lag: Lag) -> Result<OperatorSequence> {
    let shift = lag.as_usize();
    seq.check_against(filt, shift)?;
    let items = seq
        .items()
        .iter()
        .enumerate()
        .map(|(i, x)| filt.expect(i + shift, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(OperatorSequence { items, positive: seq.is_positive() })
}
