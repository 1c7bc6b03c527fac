use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use ncstein_core::runner::{parse_config, resolve_seed, run_command, EXIT_ERROR, SEED_ENV};

#[derive(Clone, Copy, ValueEnum)]
enum CommandArg {
    Axioms,
    Check,
    Search,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

/// Run an axiom suite, inequality check, constant search or sweep from a JSON
/// configuration.
///
/// Exit status: 0 on success, 1 on configuration or I/O errors, 2 when a
/// hard assertion fails (the report is still written).
#[derive(Parser)]
#[command(name = "ncstein", version)]
struct Cli {
    /// Overrides the configuration's `command` key.
    #[arg(value_enum)]
    command: CommandArg,
    /// Strict JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Report path; defaults to the configuration's `out`, else stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Takes precedence over NCSTEIN_SEED and the configuration.
    #[arg(long)]
    seed: Option<u64>,
}

fn name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value().expect("no skipped variants").get_name().to_string()
}

fn load(cli: &Cli) -> Result<ncstein_core::runner::RunConfig, String> {
    let text = std::fs::read_to_string(&cli.config).map_err(|e| format!("{}: {e}", cli.config.display()))?;
    let mut doc: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", cli.config.display()))?;
    let obj = doc.as_object_mut().ok_or_else(|| format!("{}: expected a JSON object", cli.config.display()))?;
    obj.insert("command".into(), name(cli.command).into());
    if let Some(out) = &cli.out {
        obj.insert("out".into(), out.to_string_lossy().into_owned().into());
    }
    if let Some(format) = cli.format {
        obj.insert("format".into(), name(format).into());
    }
    let mut cfg = parse_config(&doc.to_string()).map_err(|e| e.to_string())?;
    let env = std::env::var(SEED_ENV).ok();
    resolve_seed(&mut cfg, cli.seed, env.as_deref()).map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn main() -> ExitCode {
    // clap's own usage-error status (2) would collide with hard failures.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR as u8 } else { 0 });
        }
    };
    let cfg = match load(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    let code = run_command(&cfg, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    ExitCode::from(code as u8)
}
