use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ivp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ivp")).args(args).output().expect("run ivp")
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = ivp(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn integral_and_index() {
    let v = json(&["integral", "--min", "x^2-8", "--expr", "x", "--den", "2"]);
    assert_eq!(v["integral"], true);
    let v = json(&["integral", "--min", "x^2-2", "--expr", "x", "--den", "2"]);
    assert_eq!(v["integral"], false);
    let v = json(&["index", "--min", "x^2-5"]);
    assert_eq!(v["index_is_one"], "no");
    assert_eq!(v["disc"], "20");
    let v = json(&["index", "--min", "x^2-3"]);
    assert_eq!(v["index_is_one"], "yes");
}

#[test]
fn psi_lcm_and_membership() {
    let v = json(&["psi", "--prime", "2", "--n", "2", "--check-lcm"]);
    assert_eq!(v["lcm_matches"], true);
    assert_eq!(v["degree"], 6);
    let v = json(&["psi", "--prime", "2", "--n", "2", "--min", "x^3+x+1"]);
    assert_eq!(v["integral"], false);
    let out = ivp(&["psi", "--prime", "3", "--n", "5", "--check-lcm"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget exceeded"));
}

#[test]
fn classify_and_cover_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(
        dir.path(),
        "m.json",
        r#"{"n":4,"entries":[["inf","1","0","0"],["1","inf","0","0"],["0","0","inf","1"],["0","0","1","inf"]]}"#,
    );
    let v = json(&["cover", "--matrix", &m, "--delta", "1", "--crosscheck"]);
    assert_eq!(v["cover"], serde_json::json!([0, 2]));
    assert_eq!(v["classes"], serde_json::json!([[0, 1], [2, 3]]));
    assert_eq!(v["crosscheck"]["all_ok"], true);

    let s = write(dir.path(), "s.json", r#"{"n":3,"entries":[["inf","1/2","1/2"],["1/2","inf","1/2"],["1/2","1/2","inf"]]}"#);
    let v = json(&["classify", "--matrix", &s]);
    assert_eq!(v["kind"], "PseudoStationary");
    assert_eq!(v["gauge"], serde_json::json!(["1/2"]));

    let bad = write(dir.path(), "bad.json", r#"{"n":3,"entries":[["inf","1","0"],["1","inf","2"],["0","2","inf"]]}"#);
    let out = ivp(&["classify", "--matrix", &bad]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("ultrametric"));
}

#[test]
fn family_tower() {
    let v = json(&["family", "--kind", "nth-root-tower", "--p", "2", "--n", "2", "--len", "4", "--prime", "2", "--crosscheck"]);
    assert_eq!(v["verdict"]["classification"]["kind"], "PseudoConvergent");
    assert_eq!(v["verdict"]["classification"]["gauge"], serde_json::json!(["1/2", "3/4", "7/8"]));
    assert_eq!(v["verdict"]["conclusion"], "nontrivial");
    assert_eq!(v["crosscheck"]["all_agree"], true);
}

#[test]
fn closure_and_witness() {
    let dir = tempfile::tempdir().unwrap();
    let gens = write(dir.path(), "gens.json", r#"[{"f":"x","d":2}]"#);
    let v = json(&["closure", "--gens", &gens, "--min", "x^2+2x+4", "--expr", "x"]);
    assert_eq!(v["member"], true);
    let v = json(&["closure", "--gens", &gens, "--min", "x^2-2", "--expr", "x"]);
    assert_eq!(v["member"], false);
    let v = json(&["zwitness", "--min", "x^2-2", "--kmax", "8"]);
    assert_eq!(v["witness"]["k"], 2);
    assert_eq!(v["witness"]["char_poly"]["coeffs"], serde_json::json!(["1/2", "-2", "1"]));
    let v = json(&["zwitness", "--min", "x-7", "--kmax", "8"]);
    assert_eq!(v["result"], "inconclusive");
}

#[test]
fn example_suite_filters_and_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("reports");
    let out = ivp(&["verify-paper", "--filter", "nth-root-tower", "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["items"].as_array().unwrap().len(), 1);
    assert_eq!(report["items"][0]["status"], "pass");
    assert!(std::fs::read_to_string(out_dir.join("report.txt")).unwrap().contains("PASS"));

    let out = ivp(&["verify-paper", "--filter", "NoSuchAnchor"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn example_suite_full_suite_is_byte_identical() {
    let a = ivp(&["--json", "--jobs", "4", "verify-paper"]);
    let b = ivp(&["--json", "--jobs", "1", "verify-paper"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn parse_errors_are_usage_errors() {
    let out = ivp(&["integral", "--min", "x^2+", "--den", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = ivp(&["integral", "--min", "x^2-1", "--den", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("reducible"));
}
