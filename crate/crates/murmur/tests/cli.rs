use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn murmur(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_murmur")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn schedule_prints_exact_fractions() {
    let v = json(&murmur(&["schedule", "--delta", "13/14"]));
    assert_eq!(v["beta_hat"], "1/16");
    assert_eq!(v["gamma_hat"], "4/7");
    assert_eq!(v["rho_hat"], "-1/14");
}

#[test]
fn schedule_below_range_is_a_usage_error() {
    let out = murmur(&["schedule", "--delta", "3/4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = murmur(&["schedule", "--delta", "1/0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn family_counts_agree_with_a_direct_scan() {
    let v = json(&murmur(&["family", "--d0", "1000", "--d1", "2000"]));
    assert_eq!(v["count"], 43);
    assert_eq!(v["brute"], 43);
    assert_eq!(v["inputs"]["q_star"], 7);
}

#[test]
fn unknown_config_key_names_its_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"family": {"d0": 10, "width": 3}}"#).unwrap();
    let out = murmur(&["family", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("family.width"));
}

#[test]
fn config_file_overrides_the_preset() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(&path, r#"{"family": {"d0": 1000, "d1": 2000}}"#).unwrap();
    let v = json(&murmur(&["family", "--config", path.to_str().unwrap()]));
    assert_eq!(v["count"], 43);
}

#[test]
fn even_node_count_is_rejected() {
    let out = murmur(&["compare", "--nodes", "2000"]);
    assert_eq!(out.status.code(), Some(2));
}

fn small_compare(dir: &Path, name: &str, workers: &str) -> (String, Value) {
    let csv = dir.join(name);
    let out = murmur(&[
        "compare", "--d0", "9000", "--d1", "10000", "--t-max", "100", "--nodes", "2001",
        "--prime-cutoff", "1000", "--points", "5", "--workers", workers, "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let sidecar = std::fs::read(csv.with_extension("json")).unwrap();
    (text, serde_json::from_slice(&sidecar).unwrap())
}

#[test]
fn compare_writes_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let (text, summary) = small_compare(dir.path(), "a.csv", "1");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,lhs_re,lhs_im,rhs_re,rhs_im,res_re,res_im"));
    assert_eq!(lines.count(), 5);
    for key in ["config", "l2_residual_ratio", "runtime_seconds", "family_size", "omega_family"] {
        assert!(summary.get(key).is_some(), "missing {key}");
    }
    assert_eq!(summary["config"]["family"]["d0"], 9000.0);

    let (again, _) = small_compare(dir.path(), "b.csv", "3");
    assert_eq!(text, again);
}
