use std::path::PathBuf;

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::expectation::FiltrationKind;
use crate::inequality::InequalityId;
use crate::opcore::Exponent;

/// Environment variable overriding the configured seed.
pub const SEED_ENV: &str = "NCSTEIN_SEED";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Axioms,
    Check,
    Search,
    Table,
}

impl std::str::FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "axioms" => Ok(Command::Axioms),
            "check" => Ok(Command::Check),
            "search" => Ok(Command::Search),
            "table" => Ok(Command::Table),
            other => Err(Error::Config(format!(
                "command: expected one of axioms, check, search, table; got {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!("format: expected csv or json, got {other:?}"))),
        }
    }
}

/// A validated run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub inequality: Option<InequalityId>,
    pub p: Exponent,
    pub q: Exponent,
    pub lag: usize,
    pub filtration: FiltrationKind,
    pub dim: usize,
    pub seq_len: usize,
    pub seed: u64,
    /// Seeded instances evaluated by `check`.
    pub samples: usize,
    /// Random trials per level for `axioms`.
    pub trials: usize,
    pub budget: usize,
    pub restarts: usize,
    pub step_scale: f64,
    pub adapted_only: bool,
    pub grid: Vec<(Exponent, Exponent)>,
    /// Atoms of the sample space for `semicommutative` (a power of two).
    pub atoms: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    command: String,
    inequality: Option<String>,
    p: Option<Value>,
    q: Option<Value>,
    lag: Option<u64>,
    dim: Option<usize>,
    local_dims: Option<Vec<usize>>,
    filtration: Option<String>,
    seq_len: Option<usize>,
    seed: Option<u64>,
    samples: Option<usize>,
    trials: Option<usize>,
    budget: Option<usize>,
    restarts: Option<usize>,
    step_scale: Option<f64>,
    adapted_only: Option<bool>,
    grid: Option<Vec<(Value, Value)>>,
    atoms: Option<usize>,
    out: Option<String>,
    format: Option<String>,
}

fn exponent(key: &str, v: &Value) -> Result<Exponent> {
    let value = match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) if matches!(s.as_str(), "inf" | "infinity" | "Infinity" | "∞") => Some(f64::INFINITY),
        _ => None,
    }
    .ok_or_else(|| Error::Config(format!("{key}: expected a number or \"inf\", got {v}")))?;
    Exponent::new(value).map_err(|_| Error::Config(format!("{key}: must satisfy {key} ≥ 1, got {value}")))
}

fn required<T>(key: &str, v: Option<T>) -> Result<T> {
    v.ok_or_else(|| Error::Config(format!("{key}: required key is missing")))
}

/// `(p, q)` defaults by inequality when the config omits them.
fn exponents(
    command: Command,
    id: Option<InequalityId>,
    p: Option<Exponent>,
    q: Option<Exponent>,
) -> Result<(Exponent, Exponent)> {
    use InequalityId::*;
    // Sweeps take their exponents from the grid.
    let id = if command == Command::Table && p.is_none() && q.is_none() { None } else { id };
    let p = match (p, id) {
        (Some(p), _) => p,
        (None, Some(S12Adapted)) => Exponent::ONE,
        (None, Some(SQq)) if q.is_some() => q.expect("checked"),
        (None, None) => Exponent::TWO,
        (None, Some(_)) => return Err(Error::Config("p: required key is missing".into())),
    };
    let q = match (q, id) {
        (Some(q), _) => q,
        (None, Some(SQq)) => p,
        (None, Some(Dd)) => Exponent::ONE,
        (None, Some(DoobMax | SPInf)) => Exponent::INFINITY,
        (None, Some(Crp | S12Adapted)) => Exponent::TWO,
        (None, None) => Exponent::TWO,
        (None, Some(_)) => return Err(Error::Config("q: required key is missing".into())),
    };
    if id == Some(SQq) && p != q {
        return Err(Error::Config(format!("q: s_qq needs p = q, got p = {p}, q = {q}")));
    }
    if id == Some(S12Adapted) && (p != Exponent::ONE || q != Exponent::TWO) {
        return Err(Error::Config("p, q: s12_adapted is fixed at p = 1, q = 2".into()));
    }
    Ok((p, q))
}

/// Parses a strict JSON configuration. Unknown keys are rejected; defaults are
/// `seed = 0`, `restarts = 8`, the inequality's printed lag, `seq_len = 3`,
/// `samples = 1`, `trials = 100`, `budget = 1000`, `step_scale = 0.5`,
/// `atoms = 2` and `format = csv`.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let command: Command = raw.command.parse()?;

    let inequality = raw
        .inequality
        .as_deref()
        .map(|s| s.parse::<InequalityId>().map_err(|e| Error::Config(format!("inequality: {e}"))))
        .transpose()?;
    if command != Command::Axioms && inequality.is_none() {
        return Err(Error::Config("inequality: required key is missing".into()));
    }

    let p = raw.p.as_ref().map(|v| exponent("p", v)).transpose()?;
    let q = raw.q.as_ref().map(|v| exponent("q", v)).transpose()?;
    let (p, q) = exponents(command, inequality, p, q)?;

    let lag = match raw.lag {
        None => inequality.map_or(0, InequalityId::default_lag),
        Some(l @ (0 | 1)) => l as usize,
        Some(l) => return Err(Error::Config(format!("lag: must be 0 or 1, got {l}"))),
    };

    let filtration = match required("filtration", raw.filtration.as_deref())? {
        "dyadic" => {
            let dim = required("dim", raw.dim)?;
            if raw.local_dims.is_some() {
                return Err(Error::Config("local_dims: only valid with the tensor filtration".into()));
            }
            FiltrationKind::DyadicPinching { dim }
        }
        "tensor" => {
            let local_dims = required("local_dims", raw.local_dims.clone())?;
            let product: usize = local_dims.iter().product();
            if let Some(dim) = raw.dim {
                if dim != product {
                    return Err(Error::Config(format!(
                        "dim: {dim} does not match the product of local_dims ({product})"
                    )));
                }
            }
            FiltrationKind::Tensor { local_dims }
        }
        other => {
            return Err(Error::Config(format!("filtration: expected \"dyadic\" or \"tensor\", got {other:?}")));
        }
    };
    let filt = crate::expectation::make_filtration(&filtration).map_err(|e| Error::Config(format!("filtration: {e}")))?;
    let dim = filt.dim();

    let positive = |key: &str, v: usize| {
        if v == 0 {
            Err(Error::Config(format!("{key}: must be at least 1")))
        } else {
            Ok(v)
        }
    };
    let seq_len = positive("seq_len", raw.seq_len.unwrap_or(3))?;
    let samples = positive("samples", raw.samples.unwrap_or(1))?;
    let trials = positive("trials", raw.trials.unwrap_or(100))?;
    let budget = raw.budget.unwrap_or(1000);
    let restarts = raw.restarts.unwrap_or(8);
    if matches!(command, Command::Search | Command::Table) && !(budget >= restarts && restarts >= 1) {
        return Err(Error::Config(format!(
            "budget, restarts: budget ≥ restarts ≥ 1 violated (budget={budget}, restarts={restarts})"
        )));
    }
    let step_scale = raw.step_scale.unwrap_or(0.5);
    if !(step_scale.is_finite() && step_scale > 0.0) {
        return Err(Error::Config(format!("step_scale: must be positive and finite, got {step_scale}")));
    }
    let atoms = raw.atoms.unwrap_or(2);
    if atoms == 0 || !atoms.is_power_of_two() {
        return Err(Error::Config(format!("atoms: must be a power of two, got {atoms}")));
    }

    let grid = match (command, raw.grid) {
        (Command::Table, None) => return Err(Error::Config("grid: required key is missing".into())),
        (_, None) => Vec::new(),
        (_, Some(points)) => points
            .iter()
            .enumerate()
            .map(|(i, (p, q))| Ok((exponent(&format!("grid[{i}].p"), p)?, exponent(&format!("grid[{i}].q"), q)?)))
            .collect::<Result<_>>()?,
    };

    let format = raw.format.as_deref().map(str::parse).transpose()?.unwrap_or_default();

    Ok(RunConfig {
        command,
        inequality,
        p,
        q,
        lag,
        filtration,
        dim,
        seq_len,
        seed: raw.seed.unwrap_or(0),
        samples,
        trials,
        budget,
        restarts,
        step_scale,
        adapted_only: raw.adapted_only.unwrap_or(false),
        grid,
        atoms,
        out: raw.out.map(PathBuf::from),
        format,
    })
}

/// Applies seed overrides: the command-line value wins, then the
/// `NCSTEIN_SEED` environment value, then the config.
pub fn resolve_seed(cfg: &mut RunConfig, cli: Option<u64>, env: Option<&str>) -> Result<()> {
    if let Some(seed) = cli {
        cfg.seed = seed;
    } else if let Some(text) = env {
        cfg.seed = text
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("{SEED_ENV}: expected an unsigned 64-bit integer, got {text:?}")))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_example_parses_with_defaults() {
        let cfg = parse_config(
            r#"{"command":"check","inequality":"s_qq","p":2,"q":2,"dim":4,"filtration":"dyadic","seed":1}"#,
        )
        .unwrap();
        assert_eq!(cfg.command, Command::Check);
        assert_eq!(cfg.inequality, Some(InequalityId::SQq));
        assert_eq!(cfg.lag, 1);
        assert_eq!(cfg.seed, 1);
        assert_eq!(cfg.restarts, 8);
        assert_eq!(cfg.dim, 4);
    }

    #[test]
    fn small_q_is_rejected_with_constraint() {
        let err = parse_config(
            r#"{"command":"check","inequality":"s_pq","p":2,"q":0.5,"dim":4,"filtration":"dyadic"}"#,
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("q") && err.contains("q ≥ 1"), "{err}");
    }

    #[test]
    fn unknown_key_is_named() {
        let err = parse_config(r#"{"command":"axioms","dim":4,"filtration":"dyadic","foo":1}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("foo"), "{err}");
    }

    #[test]
    fn missing_and_malformed() {
        let err = parse_config(r#"{"dim":4,"filtration":"dyadic"}"#).unwrap_err().to_string();
        assert!(err.contains("command"), "{err}");
        let err = parse_config(r#"{"command":"check","dim":4,"filtration":"dyadic"}"#).unwrap_err().to_string();
        assert!(err.contains("inequality"), "{err}");
        assert!(parse_config("{not json").is_err());
        let err = parse_config(r#"{"command":"axioms","filtration":"dyadic"}"#).unwrap_err().to_string();
        assert!(err.contains("dim"), "{err}");
    }

    #[test]
    fn search_budget_validated_up_front() {
        let err = parse_config(
            r#"{"command":"search","inequality":"s_qq","p":2,"dim":4,"filtration":"dyadic","budget":0}"#,
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("budget ≥ restarts ≥ 1"), "{err}");
    }

    #[test]
    fn infinite_exponents_and_defaults() {
        let cfg = parse_config(r#"{"command":"check","inequality":"doob_max","p":"inf","local_dims":[2,2],"filtration":"tensor"}"#)
            .unwrap();
        assert!(cfg.p.is_infinite());
        assert!(cfg.q.is_infinite());
        assert_eq!(cfg.dim, 4);
    }

    #[test]
    fn seed_precedence() {
        let mut cfg = parse_config(r#"{"command":"axioms","dim":4,"filtration":"dyadic","seed":3}"#).unwrap();
        resolve_seed(&mut cfg, None, None).unwrap();
        assert_eq!(cfg.seed, 3);
        resolve_seed(&mut cfg, None, Some("9")).unwrap();
        assert_eq!(cfg.seed, 9);
        resolve_seed(&mut cfg, Some(11), Some("9")).unwrap();
        assert_eq!(cfg.seed, 11);
        assert!(resolve_seed(&mut cfg, None, Some("x")).is_err());
    }
}
