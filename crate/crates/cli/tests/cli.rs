use std::process::Command;

use seclab_cli::config::{Format, RunConfig, Suite};
use seclab_cli::emit::{emit_tables, from_json, render, to_csv, CSV_COLUMNS};
use seclab_cli::report::{Environment, Record, Report, Status, Summary};
use seclab_cli::{anchors, run};

fn seclab(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_seclab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn empty_report() -> Report {
    Report {
        config: RunConfig::default(),
        environment: Environment {
            precision: "f64".into(),
            seed: 0,
            rng: "ChaCha8".into(),
            version: "0".into(),
            threads: 1,
        },
        records: vec![],
        summary: Summary::default(),
    }
}

#[test]
fn empty_report_is_header_only_csv() {
    let text = to_csv(&empty_report()).unwrap();
    assert_eq!(text, format!("{}\n", CSV_COLUMNS.join(",")));
}

#[test]
fn json_round_trips() {
    let cfg = RunConfig {
        suite: Some(Suite::Lemmas),
        field: Some("cosine_modulated(1)".into()),
        p: Some(vec![1.5, 3.0]),
        ..Default::default()
    };
    let mut report = run(&cfg).unwrap();
    report.records.push(Record::new("x", "inf".into(), "plumbing", f64::INFINITY, 0.0, 0.0, 0.0));
    let back = from_json(&render(&report, Format::Json).unwrap()).unwrap();
    assert_eq!(back, report);
}

#[test]
fn records_carry_known_anchors() {
    for suite in [Suite::Angles, Suite::Lemmas, Suite::Sector] {
        let cfg = RunConfig { suite: Some(suite), field: Some("degenerate".into()), ..Default::default() };
        for r in run(&cfg).unwrap().records {
            assert!(anchors::is_known(&r.anchor), "{}", r.anchor);
        }
    }
}

#[test]
fn angles_sweep_writes_121_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = seclab(&["angles", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rows.headers().unwrap().iter().collect::<Vec<_>>(), CSV_COLUMNS);
    let rows: Vec<_> = rows.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 121);
    assert!(rows.iter().all(|r| &r[7] == "pass"));
}

#[test]
fn angles_example_record() {
    let out = seclab(&["angles", "--p", "2", "--theta", "0.3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(r.records.len(), 1);
    assert!((r.records[0].lhs - 0.3f64.tan()).abs() <= 1e-15);
    assert_eq!(r.records[0].status, Status::Pass);
    assert_eq!(r.environment.rng, "ChaCha8");
}

#[test]
fn lemmas_on_identity_pass_with_nonnegative_margin() {
    let out = seclab(&["lemmas", "--field", "constant(2)", "--theta", "0", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert!(!r.records.is_empty());
    for rec in &r.records {
        assert_eq!(rec.status, Status::Pass, "{rec:?}");
        assert!(rec.margin >= 0.0, "{rec:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(seclab(&["--help"]).status.code(), Some(0));
    assert_eq!(seclab(&["--version"]).status.code(), Some(0));
    assert_eq!(seclab(&["nonsense"]).status.code(), Some(64));
    assert_eq!(seclab(&["sector", "--field", "nope(1)"]).status.code(), Some(64));
    assert_eq!(seclab(&["angles", "--p", "0.5"]).status.code(), Some(64));
    assert_eq!(seclab(&["angles", "--n", "7"]).status.code(), Some(64));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(seclab(&["angles", "--config", bad.to_str().unwrap()]).status.code(), Some(65));
    std::fs::write(&bad, r#"{"unknown_key": 1}"#).unwrap();
    assert_eq!(seclab(&["angles", "--config", bad.to_str().unwrap()]).status.code(), Some(65));

    // a sector angle below the field's own one fails the sector condition
    let out = seclab(&["sector", "--field", "rotated_laplacian(1, 0.5)", "--theta", "0.2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"p": [3], "theta": 0.1, "format": "json", "seed": 4}"#).unwrap();
    let out = seclab(&["angles", "--config", cfg.to_str().unwrap(), "--p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(r.config.p, Some(vec![2.0]));
    assert_eq!(r.config.theta, Some(0.1));
    assert_eq!(r.environment.seed, 4);
    assert!((r.records[0].lhs - 0.1f64.tan()).abs() <= 1e-15);
}

#[test]
fn thread_cap_is_reported() {
    let out = Command::new(env!("CARGO_BIN_EXE_seclab"))
        .args(["angles", "--p", "3", "--format", "json"])
        .env("SECLAB_THREADS", "1")
        .output()
        .unwrap();
    let r = from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(r.environment.threads, 1);
    let out = Command::new(env!("CARGO_BIN_EXE_seclab"))
        .args(["angles"])
        .env("SECLAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn emit_tables_writes_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = emit_tables(&empty_report(), Format::Json, &dir.path().join("nested")).unwrap();
    assert!(path.ends_with("report.json"));
    assert_eq!(from_json(&std::fs::read_to_string(path).unwrap()).unwrap(), empty_report());
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain");
    std::fs::write(&file, "").unwrap();
    let out = seclab(&["angles", "--p", "2", "--out", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(74));
}
