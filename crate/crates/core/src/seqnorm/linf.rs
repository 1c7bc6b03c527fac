//! `L_p(M, ℓ_∞)` norm of positive sequences as a certified bracket.
//!
//! Lower bound: the dual formula `sup Σ τ(x_n y_n)` over positive `y_n` with
//! `‖Σ y_n‖_{p'} <= 1`, maximized by multi-restart projected ascent.
//!
//! Upper bound: any majorant `w >= x_n` factors `x_n = w^{1/2} y_n w^{1/2}`
//! with contractions `y_n`, so `‖w‖_p` bounds the norm. The majorant is the
//! better of `Σ x_n` and a barrier-method minimizer of `Tr(w^p)`; the barrier
//! dual variables `(w - x_n)^{-1}` also warm-start the ascent.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{reject_non_positive, BoundDirection, Certificate, NormValue};
use crate::error::Result;
use crate::expectation::OperatorSequence;
use crate::opcore::sample::{complex_gaussian, seeded_stream};
use crate::opcore::{hermitian_schatten_norm, Exponent, Operator};

type CMat = DMatrix<C64>;

/// Positive dual variables certifying a lower bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualCertificate {
    pub duals: OperatorSequence,
    /// `Σ_n τ(x_n y_n)`.
    pub objective: f64,
    /// `‖Σ_n y_n‖_{p'}`.
    pub feasibility: f64,
}

impl DualCertificate {
    /// Recomputes `(objective, feasibility)` against `seq`.
    pub fn evaluate(&self, seq: &OperatorSequence, p: Exponent) -> (f64, f64) {
        let objective = seq
            .items()
            .iter()
            .zip(self.duals.items())
            .map(|(x, y)| (x * y).trace().re)
            .sum();
        let feasibility = hermitian_schatten_norm(&self.duals.sum(), p.conjugate());
        (objective, feasibility)
    }
}

/// `x_n = a y_n b` with `‖y_n‖_∞ <= 1`, certifying `‖x‖ <= ‖a‖_{2p} ‖b‖_{2p}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorizationWitness {
    pub a: Operator,
    pub b: Operator,
    pub contractions: OperatorSequence,
}

impl FactorizationWitness {
    pub fn reassembly_residual(&self, seq: &OperatorSequence) -> f64 {
        seq.items()
            .iter()
            .zip(self.contractions.items())
            .map(|(x, y)| (&(&(&self.a * y) * &self.b) - x).op_norm())
            .fold(0.0, f64::max)
    }

    pub fn max_contraction_norm(&self) -> f64 {
        self.contractions.items().iter().map(Operator::op_norm).fold(0.0, f64::max)
    }

    pub fn bound(&self, p: Exponent) -> f64 {
        let two_p = match p.finite() {
            Some(p) => Exponent::new(2.0 * p).expect("2p >= 2"),
            None => Exponent::INFINITY,
        };
        crate::opcore::schatten_norm(&self.a, two_p) * crate::opcore::schatten_norm(&self.b, two_p)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinfOptions {
    pub restarts: usize,
    pub max_iterations: usize,
    pub relative_tolerance: f64,
    pub seed: u64,
}

impl Default for LinfOptions {
    fn default() -> Self {
        Self { restarts: 8, max_iterations: 5000, relative_tolerance: 1e-8, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinfBracket {
    pub lower: NormValue,
    pub upper: NormValue,
}

impl LinfBracket {
    pub fn width(&self) -> f64 {
        self.upper.value - self.lower.value
    }
}

pub fn linf_norm_positive(seq: &OperatorSequence, p: Exponent) -> Result<LinfBracket> {
    linf_norm_positive_with(seq, p, &LinfOptions::default())
}

pub fn linf_norm_positive_with(
    seq: &OperatorSequence,
    p: Exponent,
    options: &LinfOptions,
) -> Result<LinfBracket> {
    reject_non_positive(seq)?;
    if seq.is_zero() {
        let zero = NormValue::exact(0.0);
        return Ok(LinfBracket { lower: zero.clone(), upper: zero });
    }
    match p.finite() {
        None => Ok(sup_norm_bracket(seq)),
        Some(pv) => finite_bracket(seq, pv, options),
    }
}

// ---------------------------------------------------------------------------
// dense Hermitian helpers

fn herm(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

fn eigh(m: &CMat) -> (Vec<f64>, CMat) {
    let e = herm(m).symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
    let vals = order.iter().map(|&i| e.eigenvalues[i]).collect();
    let vecs = CMat::from_fn(n, n, |r, c| e.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

fn spectral(vals: &[f64], vecs: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let mut scaled = vecs.clone();
    for (j, &l) in vals.iter().enumerate() {
        let fl = f(l);
        scaled.column_mut(j).scale_mut(fl);
    }
    herm(&(scaled * vecs.adjoint()))
}

/// `Re Tr(ab)`.
fn re_trace_prod(a: &CMat, b: &CMat) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += (a[(i, j)] * b[(j, i)]).re;
        }
    }
    acc
}

/// Cholesky factor of a positive definite matrix, `None` otherwise. nalgebra's
/// complex factorization takes complex square roots of non-positive pivots
/// instead of failing, so the pivots are checked here.
fn pd_cholesky(m: &CMat) -> Option<nalgebra::Cholesky<C64, nalgebra::Dyn>> {
    let chol = herm(m).cholesky()?;
    let l = chol.l_dirty();
    (0..m.nrows())
        .all(|i| {
            let d = l[(i, i)];
            d.re.is_finite() && d.re > 0.0 && d.im.abs() <= 1e-8 * d.re
        })
        .then_some(chol)
}

fn max_eig(m: &CMat) -> f64 {
    eigh(m).0.last().copied().unwrap_or(0.0)
}

/// Coordinates of a Hermitian matrix in an orthonormal real basis: diagonal
/// entries, then `√2 Re m_ij`, `√2 Im m_ij` for `i < j`.
fn herm_to_vec(m: &CMat) -> DVector<f64> {
    let r = m.nrows();
    let mut v = DVector::zeros(r * r);
    for i in 0..r {
        v[i] = m[(i, i)].re;
    }
    let mut k = r;
    for i in 0..r {
        for j in i + 1..r {
            v[k] = std::f64::consts::SQRT_2 * m[(i, j)].re;
            v[k + 1] = std::f64::consts::SQRT_2 * m[(i, j)].im;
            k += 2;
        }
    }
    v
}

fn vec_to_herm(v: &DVector<f64>, r: usize) -> CMat {
    let mut m = CMat::zeros(r, r);
    for i in 0..r {
        m[(i, i)] = C64::new(v[i], 0.0);
    }
    let mut k = r;
    for i in 0..r {
        for j in i + 1..r {
            let z = C64::new(v[k], v[k + 1]) / std::f64::consts::SQRT_2;
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
            k += 2;
        }
    }
    m
}

fn basis_element(k: usize, r: usize) -> CMat {
    let mut v = DVector::zeros(r * r);
    v[k] = 1.0;
    vec_to_herm(&v, r)
}

/// Power mean over `dim` eigenvalues, `r` of which are given and the rest zero.
fn padded_power_mean(vals: &[f64], dim: usize, p: f64) -> f64 {
    let top = vals.iter().fold(0.0f64, |m, &l| m.max(l));
    if top == 0.0 {
        return 0.0;
    }
    if p.is_infinite() {
        return top;
    }
    let mean = vals.iter().map(|&l| (l.max(0.0) / top).powf(p)).sum::<f64>() / dim as f64;
    top * mean.powf(1.0 / p)
}

// ---------------------------------------------------------------------------
// p = ∞

fn sup_norm_bracket(seq: &OperatorSequence) -> LinfBracket {
    let dim = seq.dim();
    let tops: Vec<(f64, DVector<C64>)> = seq
        .items()
        .iter()
        .map(|x| {
            let (vals, vecs) = eigh(x.matrix());
            (vals[dim - 1], vecs.column(dim - 1).into_owned())
        })
        .collect();
    let (arg, (top, v)) = tops
        .iter()
        .enumerate()
        .fold((0, &tops[0]), |best, cur| if cur.1 .0 > best.1 .0 { cur } else { best });

    let root = Operator::identity(dim).scale(top.sqrt());
    let contractions = OperatorSequence::new(seq.items().iter().map(|x| x.scale(1.0 / top)).collect())
        .expect("nonempty");
    let witness = FactorizationWitness { a: root.clone(), b: root, contractions };

    let vv = Operator::from_matrix_unchecked(v * v.adjoint()).scale(dim as f64);
    let duals: Vec<Operator> = (0..seq.len())
        .map(|n| if n == arg { vv.hermitian_part() } else { Operator::zeros(dim) })
        .collect();
    let mut cert = DualCertificate {
        duals: OperatorSequence::positive_unchecked(duals),
        objective: 0.0,
        feasibility: 0.0,
    };
    (cert.objective, cert.feasibility) = cert.evaluate(seq, Exponent::INFINITY);
    LinfBracket {
        lower: NormValue::bounded(cert.objective, BoundDirection::Lower, Certificate::Dual(cert)),
        upper: NormValue::bounded(*top, BoundDirection::Upper, Certificate::Factorization(witness)),
    }
}

// ---------------------------------------------------------------------------
// finite p

/// The sequence compressed to the range of its sum.
struct Compressed {
    dim: usize,
    /// `d × r` isometry onto `range(Σ x_n)`.
    basis: CMat,
    /// `V* x_n V`.
    items: Vec<CMat>,
    /// `V* (Σ x_n) V`, diagonal.
    sum: CMat,
}

impl Compressed {
    fn new(seq: &OperatorSequence) -> Self {
        let dim = seq.dim();
        let (vals, vecs) = eigh(seq.sum().matrix());
        let top = vals[dim - 1];
        let keep: Vec<usize> = (0..dim).filter(|&i| vals[i] > 1e-12 * top).collect();
        let basis = CMat::from_fn(dim, keep.len(), |r, c| vecs[(r, keep[c])]);
        let items = seq.items().iter().map(|x| herm(&(basis.adjoint() * x.matrix() * &basis))).collect();
        let sum = CMat::from_fn(keep.len(), keep.len(), |r, c| {
            if r == c { C64::new(vals[keep[r]], 0.0) } else { C64::new(0.0, 0.0) }
        });
        Self { dim, basis, items, sum }
    }

    fn rank(&self) -> usize {
        self.basis.ncols()
    }

    fn embed(&self, m: &CMat) -> Operator {
        Operator::from_matrix_unchecked(herm(&(&self.basis * m * self.basis.adjoint())))
    }
}

/// Smallest `c` with `x_n <= c w` for all `n`, for positive definite `w`.
fn majorant_scale(w: &CMat, items: &[CMat]) -> f64 {
    let (vals, vecs) = eigh(w);
    let inv_root = spectral(&vals, &vecs, |l| 1.0 / l.sqrt());
    items.iter().map(|x| max_eig(&(&inv_root * x * &inv_root))).fold(0.0, f64::max)
}

/// Barrier-method minimizer of `Tr(w^p)` subject to `w >= x_n`, with the
/// inverse slacks `(w - x_n)^{-1}` at the final center.
struct Majorant<'a> {
    items: &'a [CMat],
    p: f64,
    r: usize,
}

struct Newton {
    grad: DVector<f64>,
    hess: DMatrix<f64>,
}

impl Majorant<'_> {
    fn objective(&self, w: &CMat) -> Option<f64> {
        let (vals, _) = eigh(w);
        if vals[0] <= 0.0 {
            return None;
        }
        Some(vals.iter().map(|l| l.powf(self.p)).sum())
    }

    fn barrier(&self, w: &CMat, t: f64) -> Option<f64> {
        let phi = self.objective(w)?;
        let mut logdet = 0.0;
        for x in self.items {
            let chol = pd_cholesky(&(w - x))?;
            let l = chol.l();
            logdet += 2.0 * (0..self.r).map(|i| l[(i, i)].re.ln()).sum::<f64>();
        }
        Some(t * phi - logdet)
    }

    fn slack_inverses(&self, w: &CMat) -> Option<Vec<CMat>> {
        self.items.iter().map(|x| pd_cholesky(&(w - x)).map(|c| herm(&c.inverse()))).collect()
    }

    fn newton(&self, w: &CMat, t: f64) -> Option<Newton> {
        let r = self.r;
        let p = self.p;
        let (vals, u) = eigh(w);
        let inverses = self.slack_inverses(w)?;
        let mut grad_m = spectral(&vals, &u, |l| t * p * l.powf(p - 1.0));
        for m in &inverses {
            grad_m -= m;
        }
        let f = |l: f64| l.powf(p - 1.0);
        let gamma = DMatrix::from_fn(r, r, |i, j| {
            let (a, b) = (vals[i], vals[j]);
            if (a - b).abs() > 1e-9 * a.max(b) {
                (f(a) - f(b)) / (a - b)
            } else {
                (p - 1.0) * (0.5 * (a + b)).powf(p - 2.0)
            }
        });
        let dim = r * r;
        let mut hess = DMatrix::zeros(dim, dim);
        for k in 0..dim {
            let e = basis_element(k, r);
            let mut inner = u.adjoint() * &e * &u;
            for i in 0..r {
                for j in 0..r {
                    inner[(i, j)] *= gamma[(i, j)];
                }
            }
            let mut act = (&u * inner * u.adjoint()).scale(t * p);
            for m in &inverses {
                act += m * &e * m;
            }
            hess.set_column(k, &herm_to_vec(&herm(&act)));
        }
        let hess = (&hess + hess.transpose()).scale(0.5);
        Some(Newton { grad: herm_to_vec(&grad_m), hess })
    }

    /// Damped Newton minimization of the barrier at fixed `t`.
    fn center(&self, mut w: CMat, t: f64) -> CMat {
        let mut last_decrement = f64::INFINITY;
        for _ in 0..100 {
            let Some(fw) = self.barrier(&w, t) else { break };
            let Some(nt) = self.newton(&w, t) else { break };
            let neg = -&nt.grad;
            let step = match nt.hess.clone().cholesky() {
                Some(c) => c.solve(&neg),
                None => {
                    let ridge = 1e-12 * nt.hess.diagonal().amax().max(1.0);
                    let shifted = &nt.hess + DMatrix::identity(nt.grad.len(), nt.grad.len()) * ridge;
                    match shifted.cholesky() {
                        Some(c) => c.solve(&neg),
                        None => break,
                    }
                }
            };
            let slope = nt.grad.dot(&step);
            let decrement = -slope / 2.0;
            if decrement <= 1e-24 || decrement >= last_decrement {
                break;
            }
            let dir = vec_to_herm(&step, self.r);
            if decrement < 1e-4 {
                // Quadratic convergence region: full steps, since rounding in
                // the barrier value defeats the sufficient-decrease test.
                let trial = &w + &dir;
                if self.barrier(&trial, t).is_none() {
                    break;
                }
                w = trial;
                last_decrement = decrement;
                continue;
            }
            let mut s = 1.0;
            let mut accepted = None;
            for _ in 0..60 {
                let trial = &w + dir.scale(s);
                if let Some(ft) = self.barrier(&trial, t) {
                    if ft <= fw + 0.25 * s * slope {
                        accepted = Some(trial);
                        break;
                    }
                }
                s *= 0.5;
            }
            match accepted {
                Some(next) => w = next,
                None => break,
            }
        }
        w
    }

    /// Follows the central path from `start`. Returns the last center and the
    /// dual candidates `(w - x_n)^{-1}` of every center visited: late centers
    /// have slacks near rounding level, so their inverses are not always best.
    fn solve(&self, start: CMat) -> (CMat, Vec<Vec<CMat>>) {
        let constraints = (self.items.len() * self.r) as f64;
        let mut w = start;
        let mut t = constraints / self.objective(&w).unwrap_or(1.0).max(f64::MIN_POSITIVE);
        let mut duals = Vec::new();
        for _ in 0..40 {
            w = self.center(w, t);
            duals.extend(self.slack_inverses(&w));
            let phi = self.objective(&w).unwrap_or(f64::INFINITY);
            if constraints / t <= 1e-11 * phi {
                break;
            }
            t *= 10.0;
        }
        (w, duals)
    }
}

struct Ascent<'a> {
    items: &'a [CMat],
    dim: usize,
    r: usize,
    /// Conjugate exponent `p'`.
    q: f64,
}

struct AscentPoint {
    z: Vec<CMat>,
    value: f64,
}

impl Ascent<'_> {
    /// `‖Σ z_n* z_n‖_{p'}` and its gradient with respect to `S = Σ z_n* z_n`.
    fn constraint(&self, s: &CMat) -> (f64, CMat) {
        let (vals, vecs) = eigh(s);
        let g = padded_power_mean(&vals, self.dim, self.q);
        if g == 0.0 {
            return (0.0, CMat::zeros(self.r, self.r));
        }
        if self.q.is_infinite() {
            let v = vecs.column(self.r - 1).into_owned();
            return (g, &v * v.adjoint());
        }
        let q = self.q;
        let d = self.dim as f64;
        let grad = spectral(&vals, &vecs, |l| (l.max(0.0) / g).powf(q - 1.0) / d);
        (g, grad)
    }

    fn duals(z: &[CMat]) -> Vec<CMat> {
        z.iter().map(|z| herm(&(z.adjoint() * z))).collect()
    }

    fn pairing(&self, y: &[CMat]) -> f64 {
        self.items.iter().zip(y).map(|(x, y)| re_trace_prod(x, y)).sum::<f64>() / self.dim as f64
    }

    /// Rescales `z` so the constraint is exactly active.
    fn normalize(&self, mut z: Vec<CMat>) -> Option<AscentPoint> {
        let y = Self::duals(&z);
        let s = y.iter().fold(CMat::zeros(self.r, self.r), |a, b| a + b);
        let (g, _) = self.constraint(&s);
        if !(g.is_finite() && g > 0.0) {
            return None;
        }
        let c = C64::new(1.0 / g.sqrt(), 0.0);
        for zn in &mut z {
            *zn *= c;
        }
        let value = self.pairing(&Self::duals(&z));
        Some(AscentPoint { z, value })
    }

    /// Gradient of `Σ τ(x_n y_n) / G(Σ y_n)` in `z` at a normalized point.
    fn gradient(&self, pt: &AscentPoint) -> Vec<CMat> {
        let y = Self::duals(&pt.z);
        let s = y.iter().fold(CMat::zeros(self.r, self.r), |a, b| a + b);
        let (g, dg) = self.constraint(&s);
        let d = self.dim as f64;
        pt.z.iter()
            .zip(self.items)
            .map(|(z, x)| (z * (x.scale(1.0 / d) - dg.scale(pt.value))).scale(2.0 / g))
            .collect()
    }

    fn run(&self, start: Vec<CMat>, max_iterations: usize, tol: f64) -> Option<AscentPoint> {
        let mut pt = self.normalize(start)?;
        let fro = |v: &[CMat]| v.iter().map(|m| m.norm_squared()).sum::<f64>().sqrt();
        let mut grad = self.gradient(&pt);
        let mut eta = 0.5 * fro(&pt.z) / fro(&grad).max(f64::MIN_POSITIVE);
        for _ in 0..max_iterations {
            let gn = fro(&grad);
            if gn == 0.0 || eta * gn < 1e-15 * fro(&pt.z) {
                break;
            }
            let trial: Vec<CMat> = pt.z.iter().zip(&grad).map(|(z, g)| z + g.scale(eta)).collect();
            match self.normalize(trial) {
                Some(next) if next.value > pt.value => {
                    let gain = (next.value - pt.value) / pt.value.abs().max(f64::MIN_POSITIVE);
                    pt = next;
                    grad = self.gradient(&pt);
                    eta *= 1.5;
                    if gain < tol {
                        break;
                    }
                }
                _ => eta *= 0.5,
            }
        }
        Some(pt)
    }
}

fn random_start(r: usize, len: usize, rng: &mut impl Rng) -> Vec<CMat> {
    (0..len).map(|_| CMat::from_fn(r, r, |_, _| complex_gaussian(rng))).collect()
}

fn finite_bracket(seq: &OperatorSequence, p: f64, options: &LinfOptions) -> Result<LinfBracket> {
    let comp = Compressed::new(seq);
    let r = comp.rank();
    let sigma = comp.sum[(r - 1, r - 1)].re;
    let scaled: Vec<CMat> = comp.items.iter().map(|x| x.scale(1.0 / sigma)).collect();
    let scaled_sum = comp.sum.scale(1.0 / sigma);

    // Upper bound.
    let problem = Majorant { items: &scaled, p, r };
    let (w_barrier, barrier_duals) = problem.solve(scaled_sum.scale(2.0) + CMat::identity(r, r));
    let mut candidates = vec![scaled_sum.clone()];
    if problem.objective(&w_barrier).is_some() {
        candidates.push(w_barrier.clone());
    }
    let (w_best, value_best) = candidates
        .into_iter()
        .map(|w| {
            let c = majorant_scale(&w, &scaled) * (1.0 + 1e-13);
            let w = w.scale(c * sigma);
            let value = padded_power_mean(&eigh(&w).0, comp.dim, p);
            (w, value)
        })
        .fold(None, |best: Option<(CMat, f64)>, cur| match best {
            Some(b) if b.1 <= cur.1 => Some(b),
            _ => Some(cur),
        })
        .expect("at least one candidate");
    let (vals, vecs) = eigh(&w_best);
    let root = spectral(&vals, &vecs, f64::sqrt);
    let inv_root = spectral(&vals, &vecs, |l| 1.0 / l.sqrt());
    let a = comp.embed(&root);
    let contractions = comp
        .items
        .iter()
        .map(|x| comp.embed(&(&inv_root * x * &inv_root)))
        .collect();
    let witness = FactorizationWitness {
        a: a.clone(),
        b: a,
        contractions: OperatorSequence::new(contractions)?,
    };

    // Lower bound.
    let ascent = Ascent { items: &scaled, dim: comp.dim, r, q: conjugate(p) };
    let warm: Option<Vec<CMat>> = barrier_duals
        .iter()
        .map(|ys| {
            ys.iter()
                .map(|y| {
                    let (v, u) = eigh(y);
                    spectral(&v, &u, |l| l.max(0.0).sqrt())
                })
                .collect::<Vec<_>>()
        })
        .filter_map(|z| ascent.normalize(z))
        .fold(None, |best: Option<AscentPoint>, cur| match best {
            Some(b) if b.value >= cur.value => Some(b),
            _ => Some(cur),
        })
        .map(|pt| pt.z);
    let runs: Vec<Option<AscentPoint>> = (0..options.restarts.max(1))
        .into_par_iter()
        .map(|k| {
            let start = match (&warm, k) {
                (Some(w), 0) => w.clone(),
                _ => random_start(r, scaled.len(), &mut seeded_stream(options.seed, k as u64)),
            };
            ascent.run(start, options.max_iterations, options.relative_tolerance)
        })
        .collect();
    let best = runs
        .into_iter()
        .flatten()
        .fold(None, |best: Option<AscentPoint>, cur| match best {
            Some(b) if b.value >= cur.value => Some(b),
            _ => Some(cur),
        });
    let duals: Vec<Operator> = match best {
        Some(pt) => Ascent::duals(&pt.z).iter().map(|y| comp.embed(y)).collect(),
        None => vec![Operator::zeros(comp.dim); seq.len()],
    };
    let mut cert = DualCertificate {
        duals: OperatorSequence::positive_unchecked(duals),
        objective: 0.0,
        feasibility: 0.0,
    };
    let pe = Exponent::new(p)?;
    (cert.objective, cert.feasibility) = cert.evaluate(seq, pe);
    if cert.feasibility > 1.0 {
        let c = 1.0 / cert.feasibility;
        cert.duals = OperatorSequence::positive_unchecked(
            cert.duals.items().iter().map(|y| y.scale(c)).collect(),
        );
        (cert.objective, cert.feasibility) = cert.evaluate(seq, pe);
    }
    Ok(LinfBracket {
        lower: NormValue::bounded(cert.objective.max(0.0), BoundDirection::Lower, Certificate::Dual(cert)),
        upper: NormValue::bounded(value_best, BoundDirection::Upper, Certificate::Factorization(witness)),
    })
}

fn conjugate(p: f64) -> f64 {
    if p == 1.0 { f64::INFINITY } else { p / (p - 1.0) }
}
