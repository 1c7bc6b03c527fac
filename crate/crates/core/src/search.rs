//! Extremal-ratio search. Each restart hill-climbs over `z_n` with
//! `x_n = z_n* z_n` (projected onto the adapted set when required) and keeps
//! the best ratio. Results are empirical lower bounds on best constants.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expectation::{is_adapted, make_filtration, Filtration, FiltrationKind, Lag, OperatorSequence};
use crate::inequality::{
    check_adapted_s12, check_crp_stein, check_doob_maximal, check_dual_doob, check_sp_inf,
    check_stein_isometry, check_stein_pq, check_stein_qq, InequalityId, RatioReport,
};
use crate::opcore::sample::{complex_gaussian, random_unitary, seeded_stream};
use crate::opcore::{Exponent, Operator};

pub use crate::expectation::project_adapted;

/// Initial draws tried per restart before giving up.
const MAX_INITIAL_DRAWS: usize = 100;
const REJECTIONS_BEFORE_DECAY: usize = 20;
const MIN_STEP: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    pub inequality: InequalityId,
    pub p: Exponent,
    pub q: Exponent,
    pub dim: usize,
    pub seq_len: usize,
    pub filtration: FiltrationKind,
    pub lag: usize,
    pub budget: usize,
    pub restarts: usize,
    pub step_scale: f64,
    pub seed: u64,
    pub adapted_only: bool,
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.budget >= self.restarts && self.restarts >= 1) {
            return Err(Error::Search(format!(
                "budget ≥ restarts ≥ 1 violated (budget={}, restarts={})",
                self.budget, self.restarts
            )));
        }
        if self.dim == 0 || self.seq_len == 0 {
            return Err(Error::Search("dim and seq_len must be at least 1".into()));
        }
        if !(self.step_scale.is_finite() && self.step_scale > 0.0) {
            return Err(Error::Search(format!("step_scale must be positive, got {}", self.step_scale)));
        }
        if self.lag > 1 {
            return Err(Error::OutOfRange(format!("lag must be 0 or 1, got {}", self.lag)));
        }
        match self.inequality {
            InequalityId::Projections | InequalityId::Semicommutative => {
                return Err(Error::Search(format!("{} is checked on fixed inputs, not searched", self.inequality)));
            }
            InequalityId::DoobMax if self.seq_len != 1 => {
                return Err(Error::Search("doob_max searches a single operator: seq_len must be 1".into()));
            }
            InequalityId::SQq if self.p != self.q => {
                return Err(Error::Search("s_qq needs p = q".into()));
            }
            _ => {}
        }
        let filt = make_filtration(&self.filtration)?;
        if filt.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: filt.dim() });
        }
        Ok(())
    }

    fn effective_lag(&self) -> usize {
        match self.inequality {
            InequalityId::S12Adapted => 1,
            InequalityId::Dd | InequalityId::DoobMax => 0,
            _ => self.lag,
        }
    }

    /// Adaptedness is part of the hypothesis for these inequalities.
    fn requires_adapted(&self) -> bool {
        self.adapted_only || matches!(self.inequality, InequalityId::Crp | InequalityId::S12Adapted)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub best_ratio: f64,
    /// Best sequence found, scaled so that the right-hand side equals 1.
    pub witness: OperatorSequence,
    pub evaluations_used: usize,
    /// `(evaluation index, best so far)` at every improvement.
    pub trajectory: Vec<(usize, f64)>,
    /// The checker's report on `witness`.
    pub report: RatioReport,
}

/// Fixed inputs and the checker for one search.
pub struct Objective {
    cfg: SearchConfig,
    filtration: Filtration,
    isometries: Option<OperatorSequence>,
}

impl Objective {
    pub fn new(cfg: &SearchConfig) -> Result<Self> {
        cfg.validate()?;
        let base = make_filtration(&cfg.filtration)?;
        let filtration = match cfg.inequality {
            InequalityId::DoobMax => base,
            _ => base.padded(cfg.seq_len + cfg.effective_lag()),
        };
        let isometries = (cfg.inequality == InequalityId::Isometry)
            .then(|| {
                let mut rng = seeded_stream(cfg.seed, u64::MAX);
                OperatorSequence::new((0..cfg.seq_len).map(|_| random_unitary(cfg.dim, &mut rng)).collect())
            })
            .transpose()?;
        Ok(Self { cfg: cfg.clone(), filtration, isometries })
    }

    pub fn filtration(&self) -> &Filtration {
        &self.filtration
    }

    pub fn evaluate(&self, seq: &OperatorSequence) -> Result<RatioReport> {
        let c = &self.cfg;
        let f = &self.filtration;
        let lag = c.effective_lag();
        match c.inequality {
            InequalityId::SPq => check_stein_pq(seq, f, c.p, c.q, lag),
            InequalityId::SQq => check_stein_qq(seq, f, c.q, lag),
            InequalityId::SPInf => check_sp_inf(seq, f, c.p, lag),
            InequalityId::Dd => check_dual_doob(seq, f, c.p),
            InequalityId::DoobMax => check_doob_maximal(&seq.items()[0], f, c.p),
            InequalityId::Crp => check_crp_stein(seq, f, c.p, lag),
            InequalityId::Isometry => {
                check_stein_isometry(seq, self.isometries.as_ref().expect("drawn in new"), f, c.p, c.q, lag)
            }
            InequalityId::S12Adapted => check_adapted_s12(seq, f),
            InequalityId::Projections | InequalityId::Semicommutative => {
                unreachable!("rejected by validate")
            }
        }
    }

    /// One random admissible input: `x_n = z_n* z_n` for Gaussian `z_n`,
    /// projected onto the adapted set when the inequality requires it.
    pub fn sample_instance(&self, seed: u64) -> Result<OperatorSequence> {
        let mut rng = seeded_stream(seed, 0);
        self.build(&gaussian_block(self.cfg.dim, self.cfg.seq_len, &mut rng), false)
    }

    /// `x_n = z_n* z_n`, moved into `M_0` for anchored restarts and projected
    /// onto the adapted set when required.
    fn build(&self, z: &[DMatrix<Complex64>], anchored: bool) -> Result<OperatorSequence> {
        let mut items = Vec::with_capacity(z.len());
        for zn in z {
            let x = Operator::new(zn.adjoint() * zn)?.hermitian_part();
            items.push(if anchored { self.filtration.expect(0, &x)? } else { x });
        }
        let seq = OperatorSequence::positive(items)?;
        if self.cfg.requires_adapted() {
            let lag = if self.cfg.effective_lag() == 1 { Lag::One } else { Lag::Zero };
            project_adapted(&seq, &self.filtration, lag)
        } else {
            Ok(seq)
        }
    }
}

/// Score used for maximization: a lower bound on the true ratio when one is
/// available.
fn score(report: &RatioReport) -> Option<f64> {
    report.ratio_lower().or(report.ratio).filter(|r| r.is_finite())
}

struct RestartOutcome {
    best: f64,
    seq: OperatorSequence,
    evaluations: usize,
    trajectory: Vec<(usize, f64)>,
}

fn gaussian_block(dim: usize, len: usize, rng: &mut impl Rng) -> Vec<DMatrix<Complex64>> {
    (0..len).map(|_| DMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng))).collect()
}

fn run_restart(obj: &Objective, restart: usize, budget: usize) -> Result<RestartOutcome> {
    let cfg = &obj.cfg;
    let mut rng = seeded_stream(cfg.seed, restart as u64);
    let anchored = restart == 0;
    let mut evaluations = 0;

    let mut start = None;
    let mut last_error = None;
    for _ in 0..MAX_INITIAL_DRAWS {
        if evaluations >= budget {
            break;
        }
        let z = gaussian_block(cfg.dim, cfg.seq_len, &mut rng);
        evaluations += 1;
        match obj.build(&z, anchored).and_then(|s| obj.evaluate(&s).map(|r| (s, r))) {
            Ok((seq, report)) => match score(&report) {
                Some(v) => {
                    start = Some((z, seq, v));
                    break;
                }
                None => last_error = Some("ratio undefined on initial draw".to_string()),
            },
            Err(e) => last_error = Some(e.to_string()),
        }
    }
    let Some((mut z, mut seq, mut best)) = start else {
        return Err(Error::Search(format!(
            "restart {restart}: no admissible initial draw in {MAX_INITIAL_DRAWS} attempts ({})",
            last_error.unwrap_or_else(|| "budget exhausted".into())
        )));
    };
    let mut trajectory = vec![(evaluations - 1, best)];

    let mut step = cfg.step_scale;
    let mut rejections = 0;
    while evaluations < budget && step >= MIN_STEP {
        let proposal: Vec<DMatrix<Complex64>> = z
            .iter()
            .map(|zn| zn + DMatrix::from_fn(cfg.dim, cfg.dim, |_, _| complex_gaussian(&mut rng) * step))
            .collect();
        evaluations += 1;
        let improved = obj
            .build(&proposal, anchored)
            .and_then(|s| obj.evaluate(&s).map(|r| (s, r)))
            .ok()
            .and_then(|(s, r)| score(&r).map(|v| (s, v)))
            .filter(|(_, v)| *v > best);
        match improved {
            Some((s, v)) => {
                z = proposal;
                seq = s;
                best = v;
                rejections = 0;
                trajectory.push((evaluations - 1, best));
            }
            None => {
                rejections += 1;
                if rejections == REJECTIONS_BEFORE_DECAY {
                    step *= 0.5;
                    rejections = 0;
                }
            }
        }
    }
    Ok(RestartOutcome { best, seq, evaluations, trajectory })
}

/// Runs `cfg.restarts` hill-climbs splitting `cfg.budget` evaluations, and
/// returns the best witness with its replayed ratio.
pub fn estimate_constant(cfg: &SearchConfig) -> Result<SearchResult> {
    let obj = Objective::new(cfg)?;
    let share = cfg.budget / cfg.restarts;
    let extra = cfg.budget % cfg.restarts;
    let outcomes: Vec<Result<RestartOutcome>> = (0..cfg.restarts)
        .into_par_iter()
        .map(|k| run_restart(&obj, k, share + usize::from(k < extra)))
        .collect();

    let mut trajectory = Vec::new();
    let mut offset = 0;
    let mut running = f64::NEG_INFINITY;
    let mut best: Option<RestartOutcome> = None;
    let mut errors = Vec::new();
    for outcome in outcomes {
        let o = match outcome {
            Ok(o) => o,
            Err(e) => {
                errors.push(e.to_string());
                continue;
            }
        };
        for &(i, v) in &o.trajectory {
            if v > running {
                running = v;
                trajectory.push((offset + i, v));
            }
        }
        offset += o.evaluations;
        if best.as_ref().is_none_or(|b| o.best > b.best) {
            best = Some(o);
        }
    }
    let best = best.ok_or_else(|| Error::Search(errors.join("; ")))?;

    let report = obj.evaluate(&best.seq)?;
    let witness = if report.rhs.value > 0.0 { best.seq.scale(1.0 / report.rhs.value) } else { best.seq };
    let report = obj.evaluate(&witness)?;
    let best_ratio = score(&report).ok_or_else(|| Error::Search("witness ratio undefined".into()))?;
    Ok(SearchResult { best_ratio, witness, evaluations_used: offset, trajectory, report })
}

/// Adapted check on a search witness under the config's lag.
pub fn witness_is_adapted(obj: &Objective, witness: &OperatorSequence) -> Result<bool> {
    let lag = if obj.cfg.effective_lag() == 1 { Lag::One } else { Lag::Zero };
    Ok(is_adapted(witness, &obj.filtration, lag)?.adapted)
}

#[derive(Clone, Debug)]
pub struct SweepEntry {
    pub p: Exponent,
    pub q: Exponent,
    pub result: Result<SearchResult>,
}

/// One independent search per grid point; failures are kept per point.
pub fn sweep(grid: &[(Exponent, Exponent)], base: &SearchConfig) -> Vec<SweepEntry> {
    grid.iter()
        .map(|&(p, q)| {
            let cfg = SearchConfig { p, q, ..base.clone() };
            SweepEntry { p, q, result: estimate_constant(&cfg) }
        })
        .collect()
}
