use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chromoduli"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn chromatic_of_the_example_graph() {
    let fig1 = fixture("fig1.txt");
    let out = run(&["chromatic", "--graph", fig1.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["coefficients"], serde_json::json!([0, -2, 5, -4, 1]));
}

#[test]
fn omega_in_genus_one_is_reduced() {
    let fig1 = fixture("fig1.txt");
    let out = run(&["omega", "--graph", fig1.to_str().unwrap(), "--m", "3", "--g", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["value"], 240);
    assert_eq!(v["genus_reduced"], true);
    assert_eq!(v["engine_m"], 5);
}

#[test]
fn omega_one_zero_uses_the_derivative() {
    let fig1 = fixture("fig1.txt");
    let out = run(&["omega", "--graph", fig1.to_str().unwrap(), "--m", "0", "--g", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["value"], 2);
    assert_eq!(v["method"], "derivative-formula");
}

#[test]
fn digraph_modes() {
    let fig2 = fixture("fig2.txt");
    let f = fig2.to_str().unwrap();
    for (mode, want) in [("in", 3), ("out", 4)] {
        let out = run(&["omega", "--graph", f, "--m", "3", "--mode", mode]);
        assert_eq!(json(&out)["value"], want, "{mode}");
    }
    let out = run(&["chi", "--graph", f, "--cross-check"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v[0]["polynomial"], serde_json::json!([0, 0, -2, 1]));
    assert_eq!(v[1]["polynomial"], serde_json::json!([0, 1, -2, 1]));
    assert_eq!(v[0]["routes_agree"], true);
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "3 2\n0 1\n").unwrap();
    let out = run(&["chromatic", "--graph", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());

    let missing = dir.path().join("missing.txt");
    assert_eq!(
        run(&["chromatic", "--graph", missing.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["omega", "--m", "3"]).status.code(), Some(2));
}

#[test]
fn budget_errors_exit_3() {
    let fig1 = fixture("fig1.txt");
    let f = fig1.to_str().unwrap();
    let out = run(&["omega", "--graph", f, "--m", "3", "--budget-terms", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["verify", "--graph", f, "--m", "3", "--budget-enum", "10"]);
    assert_eq!(out.status.code(), Some(3));
    let row: Value = serde_json::from_slice(out.stdout.split(|&b| b == b'\n').next().unwrap()).unwrap();
    assert_eq!(row["status"], "skipped");
}

#[test]
fn verify_default_suite_agrees_and_is_reproducible() {
    let a = run(&["verify"]);
    let b = run(&["verify"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let rows: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r["status"] == "agree"));
    assert_eq!(rows[0]["engine"], 12);
}

#[test]
fn verify_is_the_same_on_one_thread() {
    let fig1 = fixture("fig1.txt");
    let args = ["verify", "--graph", fig1.to_str().unwrap(), "--m", "3,4"];
    let many = run(&args);
    let one = Command::new(env!("CARGO_BIN_EXE_chromoduli"))
        .args(args)
        .env("CHROMODULI_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(many.stdout, one.stdout);
}

#[test]
fn kapranov_from_json() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c.json");
    std::fs::write(
        &file,
        r#"{"markings": [0, 1, 2, 3, 4], "constraints": [
            {"set": [0, 1, 2, 3, 4], "point": 0},
            {"set": [0, 1, 2, 3], "point": 0}
        ]}"#,
    )
    .unwrap();
    let out = run(&["kapranov", "--constraints", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"], 1);

    std::fs::write(&file, r#"[{"set": [0, 1], "point": 0}]"#).unwrap();
    assert_eq!(
        run(&["kapranov", "--constraints", file.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn chambers_and_critical_points() {
    let fig1 = fixture("fig1.txt");
    let f = fig1.to_str().unwrap();
    for method in ["bijective", "lp"] {
        let out = run(&["chambers", "--graph", f, "--m", "3", "--method", method]);
        assert_eq!(json(&out).as_array().unwrap().len(), 12, "{method}");
    }
    let out = run(&["critical-points", "--graph", f, "--m", "3", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let reports = json(&out);
    assert_eq!(reports.as_array().unwrap().len(), 12);
    assert!(reports
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["gradient_inf_norm"].as_f64().unwrap() <= 1e-10));
}
