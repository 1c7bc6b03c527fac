use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::opcore::Exponent;
use crate::seqnorm::{BoundDirection, NormValue};

/// Which inequality a report evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityId {
    /// `‖(Σ E(x_n)^q)^{1/q}‖_p <= C ‖(Σ x_n^q)^{1/q}‖_p`.
    SPq,
    /// The `p = q` case, constant 1.
    SQq,
    /// `ℓ_∞`-valued Stein inequality on positive sequences.
    SPInf,
    /// Dual Doob: `‖Σ E_n(x_n)‖_p <= C ‖Σ x_n‖_p`.
    Dd,
    /// `‖sup_n E_n(x)‖_p <= C ‖x‖_p`.
    DoobMax,
    Crp,
    Isometry,
    Projections,
    Semicommutative,
    /// Adapted column inequality at `p = 1`, constant 2.
    S12Adapted,
}

impl InequalityId {
    pub const ALL: [InequalityId; 10] = [
        InequalityId::SPq,
        InequalityId::SQq,
        InequalityId::SPInf,
        InequalityId::Dd,
        InequalityId::DoobMax,
        InequalityId::Crp,
        InequalityId::Isometry,
        InequalityId::Projections,
        InequalityId::Semicommutative,
        InequalityId::S12Adapted,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InequalityId::SPq => "s_pq",
            InequalityId::SQq => "s_qq",
            InequalityId::SPInf => "s_p_inf",
            InequalityId::Dd => "dd",
            InequalityId::DoobMax => "doob_max",
            InequalityId::Crp => "crp",
            InequalityId::Isometry => "isometry",
            InequalityId::Projections => "projections",
            InequalityId::Semicommutative => "semicommutative",
            InequalityId::S12Adapted => "s12_adapted",
        }
    }

    /// Lag of the printed form: `E_{n-1}` or `E_n`.
    pub fn default_lag(self) -> usize {
        match self {
            InequalityId::SQq | InequalityId::Crp | InequalityId::S12Adapted => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InequalityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        InequalityId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::OutOfRange(format!("unknown inequality {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub p: Exponent,
    pub q: Exponent,
    pub lag: usize,
}

/// One evaluated instance of an inequality.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub inequality: InequalityId,
    pub lhs: NormValue,
    pub rhs: NormValue,
    /// `lhs / rhs`; `None` when `rhs = 0`.
    pub ratio: Option<f64>,
    /// Range of the true ratio when either side is only bracketed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio_interval: Option<(f64, f64)>,
    pub params: ReportParams,
    /// `lhs` over-estimates and `rhs` under-estimates, so `ratio` bounds the
    /// true ratio from above.
    pub certifying: bool,
}

/// Outcome of a constant the theory pins down exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct HardAssertion {
    pub description: String,
    pub passed: bool,
}

pub(crate) fn ratio_of(lhs: f64, rhs: f64) -> Option<f64> {
    (rhs > 0.0).then(|| lhs / rhs)
}

impl RatioReport {
    pub(crate) fn new(inequality: InequalityId, lhs: NormValue, rhs: NormValue, params: ReportParams) -> Self {
        let ratio = ratio_of(lhs.value, rhs.value);
        let certifying = matches!(lhs.bound, BoundDirection::Exact | BoundDirection::Upper)
            && matches!(rhs.bound, BoundDirection::Exact | BoundDirection::Lower);
        Self { inequality, lhs, rhs, ratio, ratio_interval: None, params, certifying }
    }

    pub(crate) fn with_interval(mut self, lo: Option<f64>, hi: Option<f64>) -> Self {
        self.ratio_interval = match (lo, hi) {
            (Some(lo), Some(hi)) => Some((lo, hi)),
            _ => None,
        };
        self
    }

    /// A lower bound on the true ratio: the low end of the interval when the
    /// sides are bracketed, the ratio itself when both sides are exact.
    pub fn ratio_lower(&self) -> Option<f64> {
        match self.ratio_interval {
            Some((lo, _)) => Some(lo),
            None if self.lhs.bound == BoundDirection::Exact && self.rhs.bound == BoundDirection::Exact => {
                self.ratio
            }
            None => None,
        }
    }

    /// Claims `lhs > c · rhs` only when bracket arithmetic proves it.
    pub fn violates(&self, c: f64) -> bool {
        self.ratio_lower().is_some_and(|r| r > c)
    }

    /// Proves `lhs <= c · rhs` when the report is certifying.
    pub fn satisfies(&self, c: f64) -> bool {
        match self.ratio {
            None => self.lhs.value == 0.0,
            Some(r) => self.certifying && r <= c,
        }
    }

    /// Checks constants that are known exactly: 1 for `p = q`, 2 for the
    /// adapted `p = 1, q = 2` inequality, and equality in dual Doob at `p = 1`.
    pub fn hard_assertion(&self) -> Option<HardAssertion> {
        let ReportParams { p, q, .. } = self.params;
        let ceiling = |c: f64, slack: f64, name: &str| {
            let passed = match self.ratio {
                None => true,
                Some(r) => r <= c + slack,
            };
            HardAssertion { description: format!("{name}: ratio <= {c} + {slack:e}"), passed }
        };
        match self.inequality {
            InequalityId::SQq => Some(ceiling(1.0, 1e-8, "s_qq")),
            InequalityId::SPq | InequalityId::Semicommutative if p == q => {
                Some(ceiling(1.0, 1e-8, self.inequality.as_str()))
            }
            InequalityId::S12Adapted => Some(ceiling(2.0, 1e-6, "s12_adapted")),
            InequalityId::Dd if p == Exponent::ONE => Some(HardAssertion {
                description: "dd at p = 1: |lhs - rhs| <= 1e-10".into(),
                passed: (self.lhs.value - self.rhs.value).abs() <= 1e-10,
            }),
            _ => None,
        }
    }
}
