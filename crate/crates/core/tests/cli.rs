//! Exit codes and reports of the `kmnil` binary.

use std::path::Path;
use std::process::{Command, Output};

fn kmnil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kmnil"))
        .args(args)
        .env_remove("KMNIL_BUDGET")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn build_to(dir: &Path, name: &str, matrix: &str, bound: &str) -> String {
    let path = dir.join(name);
    let p = path.to_str().unwrap().to_string();
    let out = kmnil(&["build", "--matrix", matrix, "--total-bound", bound, "--out", &p]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    p
}

#[test]
fn energy_reports_value() {
    let out = kmnil(&["energy", "--matrix", "a2", "--k", "1,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["E"], 1);
}

#[test]
fn energy_length_mismatch_is_usage_error() {
    let out = kmnil(&["energy", "--matrix", "g2", "--k", "1,2,3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dimension mismatch"));
}

#[test]
fn bad_usage_exits_two() {
    assert_eq!(kmnil(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(kmnil(&["energy", "--matrix", "nosuch", "--k", "1"]).status.code(), Some(2));
    assert_eq!(kmnil(&["validate", "--matrix", "typeA0"]).status.code(), Some(2));
    assert_eq!(kmnil(&["validate", "--matrix", "cyclic1"]).status.code(), Some(2));
    assert_eq!(kmnil(&["tplus-check", "--n", "1", "--total-bound", "3"]).status.code(), Some(2));
}

#[test]
fn g2_build_has_six_vectors() {
    let dir = tempfile::tempdir().unwrap();
    let p = build_to(dir.path(), "g2.json", "g2", "6");
    let dump: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
    let total: u64 = dump["components"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["dim"].as_u64().unwrap())
        .sum();
    assert_eq!(total, 6);
}

#[test]
fn verify_a22_passes() {
    let out = kmnil(&["verify", "--matrix", "a22", "--total-bound", "8"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn compare_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let g2 = build_to(dir.path(), "g2.json", "g2", "5");
    let a2 = build_to(dir.path(), "a2.json", "a2", "3");
    let same = kmnil(&["compare", &g2, &g2]);
    assert_eq!(same.status.code(), Some(0));
    assert_eq!(json(&same)["pass"], true);
    let diff = kmnil(&["compare", &g2, &a2]);
    assert_eq!(diff.status.code(), Some(1));
    assert!(!json(&diff)["differences"].as_array().unwrap().is_empty());
}

#[test]
fn csv_output() {
    let out = kmnil(&["--format", "csv", "verify", "--matrix", "b2", "--total-bound", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("k,E,dims,residual,pass\n"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
    let energy = kmnil(&["--format", "csv", "energy", "--matrix", "b2", "--k", "1,1"]);
    assert_eq!(energy.status.code(), Some(2));
}
