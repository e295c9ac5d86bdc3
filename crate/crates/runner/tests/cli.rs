use std::path::PathBuf;
use std::process::{Command, Output};

use loclab_runner::config::ExperimentConfig;
use loclab_runner::report::ReportDocument;

fn loclab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loclab")).args(args).output().unwrap()
}

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("loclab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn fixtures_are_valid() {
    let mut n = 0;
    for entry in std::fs::read_dir(configs()).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        ExperimentConfig::from_json(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        n += 1;
    }
    assert!(n >= 5);
}

#[test]
fn list_prints_the_catalog() {
    let out = loclab(&["list"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("cylinder_threshold"));
    let out = loclab(&["list", "--json"]);
    let entries: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert!(entries.len() >= 10);
}

#[test]
fn run_writes_reports_deterministically() {
    let smoke = configs().join("smoke.json");
    let path = scratch("report.json");
    let mut texts = Vec::new();
    for _ in 0..2 {
        let out = loclab(&[
            "run",
            smoke.to_str().unwrap(),
            "--format",
            "json",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        assert!(String::from_utf8_lossy(&out.stdout).contains("microcausality"));
        texts.push(std::fs::read_to_string(&path).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
    let report = ReportDocument::from_json(&texts[0]).unwrap();
    assert_eq!(report.config.seed, 42);
    assert_eq!(report.results.len(), 6);
}

#[test]
fn run_defaults_to_the_configured_format() {
    let smoke = configs().join("smoke.json");
    let out = loclab(&["run", smoke.to_str().unwrap(), "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("experiment,system,item,outcome,holds,residual"));
    assert!(csv.lines().any(|l| l.starts_with("leakage,nw16,")));
}

#[test]
fn bad_input_exits_with_one_and_no_output() {
    let smoke = configs().join("smoke.json");
    let cases: [&[&str]; 5] = [
        &["run", smoke.to_str().unwrap(), "--system", "foo"],
        &["run", smoke.to_str().unwrap(), "--size", "100"],
        &["run", "/nonexistent/config.json"],
        &["run", smoke.to_str().unwrap(), "--format", "xml"],
        &["matrix", "--system", "measure_effect", "--mass", "2"],
    ];
    for args in cases {
        let out = loclab(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn matrix_prints_a_table() {
    let out = loclab(&["matrix", "--system", "zero_distinguished", "--size", "16"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("no_absolute_velocity") && text.contains("✗"));
    let out = loclab(&["matrix", "--system", "frozen", "--size", "16", "--format", "json"]);
    let report = ReportDocument::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(report.matrices().count(), 1);
}
