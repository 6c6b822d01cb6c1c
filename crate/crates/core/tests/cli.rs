use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bnb-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn p(x: &Path) -> &str {
    x.to_str().unwrap()
}

#[test]
fn gen_and_solve() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("inst");
    let g = run(&["gen", "--n", "8", "--count", "2", "--seed", "3", "--out", p(&out)]);
    assert!(g.status.success());
    let files: Vec<String> = String::from_utf8(g.stdout).unwrap().lines().map(String::from).collect();
    assert_eq!(files.len(), 2);
    let a = json(&run(&["solve", &files[0], "--strategy", "dfs", "--exact-tmin"]));
    let b = json(&run(&["solve", &files[0], "--strategy", "best-first", "--fix-first-spin", "false"]));
    assert_eq!(a["e_min"], b["e_min"]);
    assert!(a["t_min"].as_u64().unwrap() >= 1);
    assert!(b["t_min"].is_null());
    let bad = run(&["solve", p(&dir.path().join("missing.txt"))]);
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("missing.txt"));
}

#[test]
fn sweep_then_fit() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let s = run(&["sweep", "--n", "10..16", "--per-n", "3", "--seed", "2", "--out", p(&csv)]);
    assert!(s.status.success(), "{}", String::from_utf8_lossy(&s.stderr));
    let f = json(&run(&["fit", p(&csv), "--n-min", "10"]));
    assert!(f["slope"].as_f64().unwrap().is_finite());
    assert_eq!(f["points"].as_array().unwrap().len(), 4);
    let few = run(&["fit", p(&csv), "--n-min", "14"]);
    assert!(!few.status.success());
}

#[test]
fn qcost_fixture_all_policies() {
    for policy in ["truthful", "always-exceeds", "always-estimate", "random"] {
        let r = json(&run(&["qcost", "--fixture", "fig1", "--policy", policy]));
        assert_eq!(r["record"]["optimum_cost"], 4, "{policy}");
        assert_eq!(r["ledger"]["schema_version"], 1);
    }
    let batch = json(&run(&["qcost", "--n", "8,10", "--per-n", "2", "--policy", "always-exceeds", "--K", "5"]));
    assert_eq!(batch["records"].as_array().unwrap().len(), 4);
}

#[test]
fn knapsack_command() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("k.txt");
    std::fs::write(&f, "3 5\n2 3\n3 4\n4 5\n").unwrap();
    let r = json(&run(&["knapsack", p(&f)]));
    assert_eq!(r["value"], 7);
    assert_eq!(r["dp_value"], 7);
    assert_eq!(r["items"], serde_json::json!([1, 2]));
    std::fs::write(&f, "1 0\n2 3\n").unwrap();
    assert_eq!(json(&run(&["knapsack", p(&f)]))["value"], 0);
}

#[test]
fn verify_bounds_verdicts_stable_across_grids() {
    let dir = tempfile::tempdir().unwrap();
    let coarse = json(&run(&["verify-bounds", "--grid", "1000", "--samples", "60", "--trials", "300"]));
    let out_dir = dir.path().join("tables");
    let fine = json(&run(&[
        "verify-bounds", "--grid", "100000", "--samples", "60", "--trials", "300", "--out", p(&out_dir),
    ]));
    let verdicts = |v: &Value| -> Vec<bool> {
        v["alpha_claims"].as_array().unwrap().iter().map(|c| c["pass"].as_bool().unwrap()).collect()
    };
    assert_eq!(verdicts(&coarse), verdicts(&fine));
    assert_eq!(fine["pass"], true);
    assert!(out_dir.join("h1.csv").exists());
    assert!(out_dir.join("tails.csv").exists());
}
