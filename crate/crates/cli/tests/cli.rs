use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ncstein_core::runner::{parse_csv, parse_json, COLUMNS};

fn ncstein(args: &[&str], dir: &Path, seed_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ncstein"));
    cmd.args(args).current_dir(dir).env_remove("NCSTEIN_SEED");
    if let Some(s) = seed_env {
        cmd.env("NCSTEIN_SEED", s);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const CHECK: &str =
    r#"{"command":"check","inequality":"s_pq","p":3,"q":1.5,"dim":4,"filtration":"dyadic","samples":4,"seed":2}"#;

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", CHECK);
    for format in ["csv", "json"] {
        let a = ncstein(&["check", "--config", &cfg, "--format", format], dir.path(), None);
        let b = ncstein(&["check", "--config", &cfg, "--format", format], dir.path(), None);
        assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout);
        let text = String::from_utf8(a.stdout).unwrap();
        let rows = if format == "csv" { parse_csv(&text).unwrap() } else { parse_json(&text).unwrap() };
        assert_eq!(rows.len(), 4);
    }
}

#[test]
fn csv_header_is_fixed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", CHECK);
    let out = ncstein(&["check", "--config", &cfg], dir.path(), None);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), COLUMNS.join(","));
}

#[test]
fn seed_precedence_flag_over_env_over_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", CHECK);
    let seeds = |o: Output| -> Vec<u64> {
        parse_csv(&String::from_utf8(o.stdout).unwrap()).unwrap().iter().map(|r| r.seed).collect()
    };
    assert_eq!(seeds(ncstein(&["check", "--config", &cfg], dir.path(), None)), [2, 3, 4, 5]);
    assert_eq!(seeds(ncstein(&["check", "--config", &cfg], dir.path(), Some("10"))), [10, 11, 12, 13]);
    assert_eq!(
        seeds(ncstein(&["check", "--config", &cfg, "--seed", "20"], dir.path(), Some("10"))),
        [20, 21, 22, 23]
    );
}

#[test]
fn out_flag_writes_file_and_witness() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s.json",
        r#"{"command":"search","inequality":"s_qq","p":2,"dim":4,"filtration":"dyadic","seq_len":2,"budget":30,"restarts":2}"#,
    );
    let out = dir.path().join("r.json");
    let o = ncstein(&["search", "--config", &cfg, "--out", out.to_str().unwrap(), "--format", "json"], dir.path(), None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    assert_eq!(parse_json(&fs::read_to_string(&out).unwrap()).unwrap().len(), 1);
    assert!(dir.path().join("r.witness.json").exists());
}

#[test]
fn configuration_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"command":"search","inequality":"s_qq","p":2,"dim":4,"filtration":"dyadic","budget":0}"#, "budget ≥ restarts ≥ 1"),
        (r#"{"command":"check","inequality":"s_pq","p":2,"q":0.5,"dim":4,"filtration":"dyadic"}"#, "q ≥ 1"),
        (r#"{"command":"check","inequality":"s_qq","p":2,"dim":4,"filtration":"dyadic","foo":1}"#, "foo"),
        ("{", "c.json"),
    ];
    for (body, needle) in cases {
        let cfg = write_config(dir.path(), "c.json", body);
        let o = ncstein(&["search", "--config", &cfg], dir.path(), None);
        let err = String::from_utf8_lossy(&o.stderr);
        assert_eq!(o.status.code(), Some(1), "{body}: {err}");
        assert!(err.contains(needle), "{body}: {err}");
    }
    let o = ncstein(&["check", "--config", "missing.json"], dir.path(), None);
    assert_eq!(o.status.code(), Some(1));
    let o = ncstein(&["check"], dir.path(), None);
    assert_eq!(o.status.code(), Some(1));
    let cfg = write_config(dir.path(), "c.json", CHECK);
    let o = ncstein(&["check", "--config", &cfg, "--seed", "x"], dir.path(), None);
    assert_eq!(o.status.code(), Some(1));
    let o = ncstein(&["check", "--config", &cfg, "--out", "/nonexistent/r.csv"], dir.path(), None);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn axioms_command_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a.json", r#"{"command":"axioms","local_dims":[2,2],"filtration":"tensor","trials":20}"#);
    let o = ncstein(&["axioms", "--config", &cfg], dir.path(), None);
    assert_eq!(o.status.code(), Some(0));
    let rows = parse_csv(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert!(rows.iter().all(|r| r.lhs <= 1e-9));
}
