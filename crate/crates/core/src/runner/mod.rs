//! Configuration-driven runs: axiom suites, seeded checks, constant searches
//! and sweeps, reported as CSV or JSON with a fixed schema.

mod config;
mod report;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::expectation::{axiom_residuals, make_filtration, FiltrationKind, OperatorSequence, CONTRACTIVITY_EXPONENTS};
use crate::inequality::{
    check_projections, check_semicommutative, ClassicalFiltration, InequalityId, Probability, RatioReport,
    StochasticProcess,
};
use crate::opcore::sample::{random_positive_sequence, random_projection_family, seeded_stream};
use crate::search::{estimate_constant, sweep, Objective, SearchConfig, SearchResult};

pub use config::{parse_config, resolve_seed, Command, Format, RunConfig, SEED_ENV};
pub use report::{
    parse_csv, parse_json, sort_rows, write_csv, write_json, ReportRow, RowContext, AXIOM_PREFIX, COLUMNS, UNDEFINED,
};

/// Largest tolerated conditional-expectation axiom residual.
pub const AXIOM_TOLERANCE: f64 = 1e-9;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_HARD_FAILURE: i32 = 2;

/// Everything a run produced, before anything is written.
#[derive(Debug)]
pub struct RunOutcome {
    /// Sorted report rows.
    pub rows: Vec<ReportRow>,
    /// Failed hard assertions, one description each.
    pub hard_failures: Vec<String>,
    /// Non-fatal errors (failed sweep points); they force exit 1.
    pub errors: Vec<String>,
    /// Search witness and trajectory, written next to the report.
    pub witness: Option<SearchResult>,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if !self.hard_failures.is_empty() {
            EXIT_HARD_FAILURE
        } else if !self.errors.is_empty() {
            EXIT_ERROR
        } else {
            EXIT_OK
        }
    }
}

fn filtration_name(kind: &FiltrationKind) -> &'static str {
    match kind {
        FiltrationKind::DyadicPinching { .. } => "dyadic",
        FiltrationKind::Tensor { .. } => "tensor",
    }
}

fn context(cfg: &RunConfig, seq_len: usize) -> RowContext {
    RowContext { dim: cfg.dim, seq_len, filtration: filtration_name(&cfg.filtration).into() }
}

fn search_config(cfg: &RunConfig, inequality: InequalityId) -> SearchConfig {
    SearchConfig {
        inequality,
        p: cfg.p,
        q: cfg.q,
        dim: cfg.dim,
        seq_len: cfg.seq_len,
        filtration: cfg.filtration.clone(),
        lag: cfg.lag,
        budget: cfg.budget,
        restarts: cfg.restarts,
        step_scale: cfg.step_scale,
        seed: cfg.seed,
        adapted_only: cfg.adapted_only,
    }
}

fn note_hard(report: &RatioReport, seed: u64, failures: &mut Vec<String>) {
    if let Some(h) = report.hard_assertion() {
        if !h.passed {
            failures.push(format!("seed {seed}: {} failed (ratio {:?})", h.description, report.ratio));
        }
    }
}

fn axiom_row(name: String, residual: f64, ctx: &RowContext, seed: u64, trials: usize) -> ReportRow {
    ReportRow {
        inequality_id: format!("{AXIOM_PREFIX}{name}"),
        p: None,
        q: None,
        lag: None,
        dim: ctx.dim,
        seq_len: ctx.seq_len,
        filtration: ctx.filtration.clone(),
        seed,
        lhs: residual,
        lhs_bound: "exact".into(),
        rhs: AXIOM_TOLERANCE,
        rhs_bound: "exact".into(),
        ratio: Some(residual / AXIOM_TOLERANCE),
        certifying: true,
        evaluations: trials,
    }
}

fn run_axioms(cfg: &RunConfig) -> Result<RunOutcome> {
    let filt = make_filtration(&cfg.filtration)?;
    let ctx = context(cfg, filt.len());
    let mut rows = Vec::new();
    for (n, level) in filt.levels().iter().enumerate() {
        let r = axiom_residuals(level, cfg.trials, cfg.seed.wrapping_add(n as u64))?;
        let mut named = vec![
            ("projection".to_string(), r.projection),
            ("bimodule".to_string(), r.bimodule),
            ("trace".to_string(), r.trace),
            ("positivity".to_string(), r.positivity),
            ("adjoint".to_string(), r.adjoint),
        ];
        for (p, c) in CONTRACTIVITY_EXPONENTS.iter().zip(r.contractivity) {
            let p = if p.is_infinite() { "inf".to_string() } else { p.to_string() };
            named.push((format!("contractivity_p{p}"), c));
        }
        for (name, residual) in named {
            rows.push(axiom_row(format!("level{n:02}.{name}"), residual, &ctx, cfg.seed, cfg.trials));
        }
    }
    let tower = filt.tower_residual(cfg.trials, cfg.seed)?;
    rows.push(axiom_row("tower".into(), tower, &ctx, cfg.seed, cfg.trials));

    let hard_failures = rows
        .iter()
        .filter(|r| r.lhs.is_nan() || r.lhs > AXIOM_TOLERANCE)
        .map(|r| format!("{}: residual {:e} exceeds {AXIOM_TOLERANCE:e}", r.inequality_id, r.lhs))
        .collect();
    Ok(RunOutcome { rows, hard_failures, errors: Vec::new(), witness: None })
}

/// One seeded instance of a fixed-input inequality.
fn check_fixed(cfg: &RunConfig, id: InequalityId, seed: u64) -> Result<RatioReport> {
    let mut rng = seeded_stream(seed, 0);
    match id {
        InequalityId::Projections => {
            let filt = make_filtration(&cfg.filtration)?.padded(cfg.seq_len);
            let projs = random_projection_family(cfg.dim, cfg.seq_len, &mut rng)?;
            check_projections(&filt, cfg.p, cfg.q, &projs)
        }
        InequalityId::Semicommutative => {
            let classical = ClassicalFiltration::dyadic(cfg.atoms)?;
            let atoms = cfg.atoms as u64;
            let paths = (0..cfg.atoms)
                .map(|_| random_positive_sequence(cfg.dim, cfg.seq_len, &mut rng))
                .collect::<Result<Vec<OperatorSequence>>>()?;
            let process = StochasticProcess {
                probabilities: vec![Probability { num: 1, den: atoms }; cfg.atoms],
                paths,
            };
            check_semicommutative(&process, &classical, cfg.p, cfg.q, cfg.lag)
        }
        _ => unreachable!("searchable inequalities go through the objective"),
    }
}

fn run_check(cfg: &RunConfig, id: InequalityId) -> Result<RunOutcome> {
    let ctx = context(cfg, if id == InequalityId::DoobMax { 1 } else { cfg.seq_len });
    let objective = match id {
        InequalityId::Projections | InequalityId::Semicommutative => None,
        _ => {
            let mut sc = search_config(cfg, id);
            sc.seq_len = ctx.seq_len;
            sc.budget = 1;
            sc.restarts = 1;
            Some(Objective::new(&sc)?)
        }
    };
    let mut rows = Vec::with_capacity(cfg.samples);
    let mut hard_failures = Vec::new();
    for k in 0..cfg.samples {
        let seed = cfg.seed.wrapping_add(k as u64);
        let report = match &objective {
            Some(obj) => obj.evaluate(&obj.sample_instance(seed)?)?,
            None => check_fixed(cfg, id, seed)?,
        };
        note_hard(&report, seed, &mut hard_failures);
        rows.push(ReportRow::from_report(&report, &ctx, seed, 1));
    }
    Ok(RunOutcome { rows, hard_failures, errors: Vec::new(), witness: None })
}

fn run_search(cfg: &RunConfig, id: InequalityId) -> Result<RunOutcome> {
    let result = estimate_constant(&search_config(cfg, id))?;
    let ctx = context(cfg, result.witness.len());
    let mut hard_failures = Vec::new();
    note_hard(&result.report, cfg.seed, &mut hard_failures);
    let rows = vec![ReportRow::from_report(&result.report, &ctx, cfg.seed, result.evaluations_used)];
    Ok(RunOutcome { rows, hard_failures, errors: Vec::new(), witness: Some(result) })
}

fn run_table(cfg: &RunConfig, id: InequalityId) -> Result<RunOutcome> {
    let base = search_config(cfg, id);
    let ctx = context(cfg, cfg.seq_len);
    let mut out = RunOutcome { rows: Vec::new(), hard_failures: Vec::new(), errors: Vec::new(), witness: None };
    for entry in sweep(&cfg.grid, &base) {
        match entry.result {
            Ok(result) => {
                note_hard(&result.report, cfg.seed, &mut out.hard_failures);
                out.rows.push(ReportRow::from_report(&result.report, &ctx, cfg.seed, result.evaluations_used));
            }
            Err(e) => out.errors.push(format!("p = {}, q = {}: {e}", entry.p, entry.q)),
        }
    }
    Ok(out)
}

/// Executes a validated configuration without writing anything.
pub fn execute(cfg: &RunConfig) -> Result<RunOutcome> {
    let id = || cfg.inequality.ok_or_else(|| Error::Config("inequality: required key is missing".into()));
    let mut outcome = match cfg.command {
        Command::Axioms => run_axioms(cfg)?,
        Command::Check => run_check(cfg, id()?)?,
        Command::Search => run_search(cfg, id()?)?,
        Command::Table => run_table(cfg, id()?)?,
    };
    sort_rows(&mut outcome.rows);
    Ok(outcome)
}

/// Renders the rows in the requested format.
pub fn render(rows: &[ReportRow], format: Format) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    match format {
        Format::Csv => write_csv(rows, &mut buf)?,
        Format::Json => write_json(rows, &mut buf)?,
    }
    Ok(buf)
}

/// `<dir>/<stem>.witness.json` beside the report.
pub fn witness_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "report".into());
    out.with_file_name(format!("{stem}.witness.json"))
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

/// Writes the report (and a search witness, when present) to `cfg.out`, or
/// the report alone to `stdout` when no path is configured.
pub fn write_outputs(cfg: &RunConfig, outcome: &RunOutcome, stdout: &mut dyn Write) -> Result<()> {
    let bytes = render(&outcome.rows, cfg.format)?;
    match &cfg.out {
        None => stdout.write_all(&bytes).map_err(|e| Error::Io(e.to_string())),
        Some(path) => {
            fs::write(path, &bytes).map_err(|e| io_err(path, e))?;
            if let Some(w) = &outcome.witness {
                let wp = witness_path(path);
                let text = serde_json::to_string_pretty(w).map_err(|e| Error::Io(e.to_string()))?;
                fs::write(&wp, text + "\n").map_err(|e| io_err(&wp, e))?;
            }
            Ok(())
        }
    }
}

/// Runs a configuration end to end and returns the exit code; diagnostics go
/// to `stderr`.
pub fn run_command(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let outcome = match execute(cfg) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_ERROR;
        }
    };
    if let Err(e) = write_outputs(cfg, &outcome, stdout) {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_ERROR;
    }
    for e in &outcome.errors {
        let _ = writeln!(stderr, "error: {e}");
    }
    for h in &outcome.hard_failures {
        let _ = writeln!(stderr, "hard assertion failed: {h}");
    }
    outcome.exit_code()
}
