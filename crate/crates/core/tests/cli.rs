use std::path::PathBuf;
use std::process::{Command, Output};

use snumlab::Operator;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn snumlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_snumlab"))
        .args(args)
        .env_remove("SNUMLAB_SEED")
        .output()
        .expect("binary runs")
}

fn fx(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn mu_of_diag321() {
    let out = snumlab(&["mu", &fx("diag321.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim_end(), "0,1,3\n1,2,2\n2,3,1\n3,inf,0");
}

#[test]
fn mu_json_format() {
    let out = snumlab(&["mu", &fx("diag321.json"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.to_string().contains("inf"));
}

#[test]
fn young_check_witness_is_equality() {
    let out = snumlab(&["young-check", &fx("witness_a.json"), &fx("witness_b.json"), "--p", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stderr).unwrap().contains("equality: true"));
    let report = String::from_utf8(out.stdout).unwrap();
    assert!(report.starts_with("s_start,s_end,mu_ab,mu_D,gap\n"));
}

#[test]
fn young_check_loose_tolerance_reports_violation() {
    // With tol = 1e-2 the gap ε²/2 passes as μ-equality but |a|² ≠ |b|².
    let out = snumlab(&["young-check", &fx("loose_a.json"), &fx("loose_b.json"), "--tol", "0.01"]);
    assert_eq!(out.status.code(), Some(1));
    let out = snumlab(&["young-check", &fx("loose_a.json"), &fx("loose_b.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stderr).unwrap().contains("equality: false"));
}

#[test]
fn malformed_json_exits_2_with_position() {
    let out = snumlab(&["mu", &fx("malformed.json")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 1") && err.contains("column"), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(snumlab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(snumlab(&["mu", &fx("no_such_file.json")]).status.code(), Some(2));
    let out = snumlab(&["young-check", &fx("diag321.json"), &fx("witness_a.json")]);
    assert_eq!(out.status.code(), Some(2));
    let out = snumlab(&["young-check", &fx("witness_a.json"), &fx("witness_b.json"), "--p", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn equality_scan_is_deterministic() {
    let run = || snumlab(&["equality-scan", "--trials", "100", "--seed", "7"]);
    let (a, b) = (run(), run());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(String::from_utf8(a.stdout).unwrap().lines().count(), 101);
}

#[test]
fn seed_from_environment() {
    let base = || {
        let mut c = Command::new(env!("CARGO_BIN_EXE_snumlab"));
        c.args(["equality-scan", "--trials", "10"]);
        c
    };
    let env = base().env("SNUMLAB_SEED", "7").output().unwrap();
    let flag = base().env_remove("SNUMLAB_SEED").args(["--seed", "7"]).output().unwrap();
    let zero = base().env_remove("SNUMLAB_SEED").output().unwrap();
    assert_eq!(env.stdout, flag.stdout);
    assert_ne!(env.stdout, zero.stdout);
}

#[test]
fn out_path_receives_report() {
    let path = std::env::temp_dir().join(format!("snumlab-out-{}.csv", std::process::id()));
    let out = snumlab(&["mu", &fx("diag321.json"), "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(written.starts_with("0,1,3\n"));
}

#[test]
fn flags_demo_on_mixed_fixture() {
    let out = snumlab(&["flags-demo", &fx("mixed.json")]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("t_start,t_end,block,eigenindex,portion\n"));
    let out = snumlab(&["flags-demo", &fx("mixed.json"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["ok"] == true));
}

#[test]
fn norms_check_default_and_refusal() {
    let out = snumlab(&["norms-check", &fx("witness_a.json"), &fx("witness_b.json"), "--p", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().count(), 3);
    let out = snumlab(&["norms-check", &fx("witness_a.json"), &fx("witness_b.json"), "--norm", "kyfan:1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("not strictly increasing"));
}

#[test]
fn suite_small_passes() {
    let out = snumlab(&["suite", "--trials", "10", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().count(), 11);
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn fixtures_round_trip() {
    for name in ["diag321.json", "witness_a.json", "witness_b.json", "loose_a.json", "mixed.json"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let op = Operator::from_json(&text).unwrap();
        let again = Operator::from_json(&op.to_json()).unwrap();
        assert_eq!(op, again, "{name}");
        assert_eq!(op.to_json(), again.to_json());
    }
}
