//! The shipped binary: exit codes, output formats and config handling.

use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_shrinklab");

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(BIN).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn risk_curve_csv_header_and_rows() {
    let (code, out, _) = run(&["risk-curve", "--factor", "js", "--p", "5", "--nu", "0,1"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "nu,risk,stderr,method,p,factor");
    assert_eq!(lines.len(), 3);
    let risk: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((risk - 2.0).abs() < 1e-9);
}

#[test]
fn config_errors_exit_2() {
    assert_eq!(run(&["risk-curve", "--factor", "nope(x=1)", "--p", "5"]).0, 2);
    assert_eq!(run(&["risk-curve", "--factor", "js", "--p", "5", "--nu", "1", "--nu-geom", "1:4:3"]).0, 2);
    assert_eq!(run(&["risk-curve", "--factor", "js", "--p", "5", "--method", "mc", "--reps", "10"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
}

#[test]
fn certify_exit_codes() {
    let (code, out, _) = run(&["certify", "--factor", "mcp(lambda=1,alpha=2)", "--p", "5"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["case"], "case1");
    assert_eq!(run(&["certify", "--factor", "js_plus", "--p", "5"]).0, 4);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"command":"js-gap","p":3,"nu":[0.0,1.0]}"#).unwrap();
    let (code, out, _) = run(&["js-gap", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().count(), 3);
    let (code, out, _) = run(&["js-gap", "--config", cfg.to_str().unwrap(), "--nu", "5"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 2);
    std::fs::write(&cfg, r#"{"command":"certify","p":3}"#).unwrap();
    assert_eq!(run(&["js-gap", "--config", cfg.to_str().unwrap()]).0, 2);
}

#[test]
fn verify_theorem_reports_monotone_summary() {
    let (code, out, _) = run(&["verify-theorem", "--a", "4", "--b", "0", "--p", "3"]);
    assert_eq!(code, 0);
    assert!(out.lines().last().unwrap().starts_with("#rel_dev_strictly_decreasing"));
    assert!(out.lines().last().unwrap().contains("true"));
}

#[test]
fn plot_of_empty_csv_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("empty.csv");
    std::fs::write(&csv, "nu,risk,stderr,method,p,factor\n").unwrap();
    assert_eq!(run(&["plot", "--csv", csv.to_str().unwrap()]).0, 2);
}
