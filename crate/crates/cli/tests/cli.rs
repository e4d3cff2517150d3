use std::process::{Command, Output};

use serde_json::Value;

const HEADLINE: &str = "3: -1 -2 -1 -2 -1 -2 2 2 2 2";

fn khb(args: &[&str], cache: Option<&std::path::Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_khb"));
    cmd.args(args);
    match cache {
        Some(dir) => cmd.env("KHB_CACHE", dir),
        None => cmd.env_remove("KHB_CACHE"),
    };
    cmd.output().expect("khb runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn row(v: &Value, i: i64) -> Vec<(i64, i64)> {
    v["dims"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["i"] == i)
        .map(|c| (c["j"].as_i64().unwrap(), c["dim"].as_i64().unwrap()))
        .collect()
}

#[test]
fn kh_headline_row_from_both_backends() {
    let cube = khb(&["kh", HEADLINE, "--detail", "ij"], None);
    let scan = khb(&["kh", HEADLINE, "--backend", "scan"], None);
    assert_eq!(row(&json(&cube), 0), vec![(-3, 1), (-1, 3), (1, 2)]);
    assert_eq!(cube.stdout, scan.stdout);
    let balanced = khb(&["kh", HEADLINE, "--backend", "scan", "--balanced"], None);
    assert_eq!(cube.stdout, balanced.stdout);
}

#[test]
fn kh_unknot_and_annular_detail() {
    let v = json(&khb(&["kh", "2: 1"], None));
    assert_eq!(row(&v, 0), vec![(-1, 1), (1, 1)]);
    let v = json(&khb(&["kh", "1:", "--detail", "ijk"], None));
    assert_eq!(v["total"], 2);
    assert!(v["dims"][0].get("k").is_some());
}

#[test]
fn exit_codes() {
    assert_eq!(khb(&["kh", "3: 9"], None).status.code(), Some(2));
    assert_eq!(khb(&["kh", "2: 1", "--backend", "nope"], None).status.code(), Some(2));
    assert_eq!(khb(&["kh", "2: 1 1 1 1", "--max-crossings", "2"], None).status.code(), Some(3));
    assert_eq!(khb(&["shapes", "--strands", "9"], None).status.code(), Some(3));
    assert_eq!(khb(&["classify3", "F3 d=0 m=-1"], None).status.code(), Some(4));
    assert_eq!(khb(&["classify3", "F9 d=0"], None).status.code(), Some(2));
}

#[test]
fn invariants_of_headline_word() {
    let v = json(&khb(&["invariants", HEADLINE], None));
    assert_eq!(v["writhe"], -2);
    assert_eq!(v["s"], -2);
    assert_eq!(v["psi"], false);
    let bp = &v["dt"]["breakpoints"];
    assert_eq!(bp[0]["value"], serde_json::json!({"num": -3, "den": 1}));
    assert_eq!(bp[1]["value"], serde_json::json!({"num": -2, "den": 1}));
    let other = khb(&["invariants", HEADLINE, "--solver", "level-search"], None);
    assert_eq!(json(&other), v);
}

#[test]
fn invariants_of_trivial_braid() {
    let v = json(&khb(&["invariants", "1:"], None));
    assert_eq!((v["writhe"].as_i64(), v["s"].as_i64()), (Some(0), Some(0)));
    assert_eq!(v["dt"]["breakpoints"][0]["value"]["num"], -1);
}

#[test]
fn shape_catalogs() {
    assert_eq!(json(&khb(&["shapes", "--strands", "3"], None))["count"], 3);
    assert_eq!(json(&khb(&["shapes", "--upsilon-genus", "1"], None))["count"], 5);
}

#[test]
fn classify3_records() {
    let v = json(&khb(&["classify3", "F2 d=1 m=-4"], None));
    assert_eq!((v["s"].as_i64(), v["delta"].as_i64(), v["psi_nonzero"].as_bool()), (Some(0), Some(-2), Some(true)));
    assert_eq!(v["source"], "closed-form");
    let v = json(&khb(&["classify3", "F1 d=1 a=1"], None));
    assert_eq!(v["delta"], -2);
    let v = json(&khb(&["classify3", "F3 d=0 m=-1", "--fallback"], None));
    assert_eq!(v["source"], "computed-fallback");
    assert_eq!(v["s"].as_i64().unwrap() - v["writhe"].as_i64().unwrap(), v["delta"].as_i64().unwrap());
    let v = json(&khb(&["classify3", "F2 d=-1 m=3", "--mirror-nf", "F2 d=1 m=-3"], None));
    assert_eq!(v["delta"], 2);
}

#[test]
fn cache_hits_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["invariants", "3: 1 -2 1 -2 2"];
    let fresh = khb(&args, None);
    let first = khb(&args, Some(dir.path()));
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(entries.len(), 1);
    let second = khb(&args, Some(dir.path()));
    assert!(fresh.status.success());
    assert_eq!(fresh.stdout, first.stdout);
    assert_eq!(first.stdout, second.stdout);
    // equivalent spellings of the word share one entry
    let spaced = khb(&["invariants", "3:  1 -2  1 -2 2 "], Some(dir.path()));
    assert_eq!(spaced.stdout, first.stdout);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn output_is_canonical() {
    let out = khb(&["classify3", "F2 d=-1 m=4"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    let reparsed: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(format!("{reparsed}\n"), text);
    let keys: Vec<&String> = reparsed.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}
