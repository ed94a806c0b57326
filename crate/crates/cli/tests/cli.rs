//! End-to-end runs of the `csing` binary on small documents.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn csing(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csing")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

const CHAIN: &str = r#"{"graph":{"vertices":[{"id":1,"genus":0,"self":-3},{"id":2,"genus":0,"self":-2}],"edges":[[1,2]]}}"#;

const STAR_237: &str = r#"{"graph":{
  "vertices":[{"id":0,"genus":0,"self":-1},{"id":1,"genus":0,"self":-2},{"id":2,"genus":0,"self":-3},{"id":3,"genus":0,"self":-7}],
  "edges":[[0,1],[0,2],[0,3]]}}"#;

// (z, w) ↦ (z/2, w/4 + z²); z² is resonant for the second coordinate
const GERM: &str = r#"{"jet":{"dimension":2,"order":6,"coordinates":[
  [{"exponents":[1,0],"value":"1/2"}],
  [{"exponents":[0,1],"value":"1/4"},{"exponents":[2,0],"value":"1"}]]}}"#;

// (z, w) ↦ (z, w/2 + w²/2)
const FAMILY: &str = r#"{"jet":{"dimension":2,"order":6,"coordinates":[
  [{"exponents":[1,0],"value":"1"}],
  [{"exponents":[0,1],"value":"1/2"},{"exponents":[0,2],"value":"1/2"}]]}}"#;

#[test]
fn hj_expand_and_fold() {
    let v = json_of(&csing(&["hj", "expand", "7", "3"]));
    assert_eq!(v["chain"], serde_json::json!([3, 2, 2]));
    let v = json_of(&csing(&["hj", "fold", "3", "2", "2"]));
    assert_eq!((v["m"].as_i64(), v["q"].as_i64()), (Some(7), Some(3)));
    let bad = csing(&["hj", "fold", "2", "1"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("entry 1"));
}

#[test]
fn classify_writes_report() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "chain.json", CHAIN);
    let output = dir.path().join("report.json");
    let out = csing(&["classify", "--input", input.to_str().unwrap(), "--output", output.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(v["classification"]["variant"], "cyclic_quotient");
    assert_eq!((v["classification"]["m"].as_i64(), v["classification"]["q"].as_i64()), (Some(5), Some(2)));
    assert_eq!(v["orbit_surface"]["class"], "hopf");
    assert!(v["provenance"].as_array().unwrap().len() >= 3);
    assert!(v["residuals"].is_object());
}

#[test]
fn classify_many_inputs_in_order() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", STAR_237);
    let b = write(&dir, "b.json", CHAIN);
    for flag in [None, Some("--sequential")] {
        let mut args = vec!["classify", "--input", a.to_str().unwrap(), b.to_str().unwrap()];
        args.extend(flag);
        let v = json_of(&csing(&args));
        let reports = v.as_array().unwrap();
        assert_eq!(reports[0]["orbit_surface"]["class"], "properly_elliptic_quotient");
        assert_eq!(reports[0]["classification"]["orbidegree"], "-1/42");
        assert_eq!(reports[1]["orbit_surface"]["class"], "hopf");
    }
}

#[test]
fn classify_rejects_cycles() {
    let dir = TempDir::new().unwrap();
    let cyc = r#"{"graph":{"vertices":[{"id":1,"genus":0,"self":-3},{"id":2,"genus":0,"self":-3},{"id":3,"genus":0,"self":-3}],
      "edges":[[1,2],[2,3],[3,1]]}}"#;
    let input = write(&dir, "cycle.json", cyc);
    let out = csing(&["classify", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("product"));
}

#[test]
fn graph_commands() {
    let dir = TempDir::new().unwrap();
    let g = r#"{"vertices":[{"id":1,"genus":0,"self":-3},{"id":2,"genus":0,"self":-1},{"id":3,"genus":0,"self":-3}],"edges":[[1,2],[2,3]]}"#;
    let input = write(&dir, "g.json", g);
    let p = input.to_str().unwrap();
    let v = json_of(&csing(&["graph", "check", "--input", p]));
    assert_eq!(v["negative_definite"], true);
    assert_eq!(v["abs_determinant"], "3");
    let v = json_of(&csing(&["graph", "contract", "--input", p]));
    assert_eq!(v["contracted"], serde_json::json!([2]));
    let v = json_of(&csing(&["graph", "shape", "--input", p]));
    assert_eq!(v["kind"], "chain");
}

#[test]
fn orbifold_commands() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "o.json", r#"{"genus":0,"marks":[2,3,7],"bundle":{"e":-1,"local":[[2,1],[3,1],[7,1]]}}"#);
    let p = input.to_str().unwrap();
    let v = json_of(&csing(&["orbifold", "classify", "--input", p]));
    assert_eq!(v["geometry"], "hyperbolic");
    assert_eq!(v["euler_characteristic"], "-1/42");
    let v = json_of(&csing(&["orbifold", "cover", "--input", p]));
    assert_eq!((v["degree"].as_u64(), v["genus"].as_u64()), (Some(84), Some(2)));
    let v = json_of(&csing(&["orbifold", "degree", "--input", p]));
    assert_eq!(v["orbidegree"], "-1/42");
    assert_eq!(v["contractible"], true);
    let bad = csing(&["orbifold", "cover", "--input", p, "--degree", "5"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn normalize_and_koenigs() {
    let dir = TempDir::new().unwrap();
    let germ = write(&dir, "germ.json", GERM);
    for mode in ["exact", "float"] {
        let v = json_of(&csing(&["normalize", "--input", germ.to_str().unwrap(), "--order", "6", "--mode", mode]));
        assert_eq!(v["residual_norm"].as_f64(), Some(0.0), "{mode}");
        assert_eq!(v["linear"], false);
        assert!(v["resonant_monomials"].as_u64().unwrap() >= 1);
    }
    let fam = write(&dir, "family.json", FAMILY);
    let v = json_of(&csing(&["koenigs", "--input", fam.to_str().unwrap(), "--order", "6"]));
    assert_eq!(v["alpha"], "1/2");
    let eta = &v["linearization"]["coordinates"][1];
    let w2 = eta.as_array().unwrap().iter().find(|t| t["exponents"] == serde_json::json!([0, 2])).unwrap();
    assert_eq!(w2["value"], "2");
}

#[test]
fn verify_suite_exits_zero() {
    let start = std::time::Instant::now();
    let out = csing(&["verify"]);
    let text = String::from_utf8_lossy(&out.stdout);
    println!("{text}");
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(start.elapsed().as_secs() < 120);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 8);
    assert!(!text.contains("FAIL"));
}
