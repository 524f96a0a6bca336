use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn commdeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_commdeg"))
        .args(args)
        .env_remove("COMMDEG_MAX_ORDER")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = commdeg(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn code(args: &[&str]) -> i32 {
    commdeg(args).status.code().expect("exit code")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

fn frac(v: &Value) -> (u128, u128) {
    let p = |k: &str| v[k].as_str().unwrap().parse::<u128>().unwrap();
    (p("num"), p("den"))
}

#[test]
fn profile_sums_to_one() {
    let doc = json(&["prob", "-G", "S3", "-H", "full", "-K", "full", "-n", "1", "-m", "1", "-g", "all", "-o", "json"]);
    let profile = doc["profile"].as_array().unwrap();
    assert_eq!(profile.len(), 6);
    let (mut num, mut den) = (0u128, 1u128);
    for e in profile {
        let (a, b) = frac(&e["value"]);
        num = num * b + a * den;
        den *= b;
        assert_eq!(e["cross_check"]["agrees"], Value::Bool(true));
    }
    assert_eq!(num, den);
}

#[test]
fn spot_probabilities() {
    let doc = json(&["prob", "-G", "S3", "-n", "1", "-m", "1", "-g", "1", "-o", "json"]);
    assert_eq!(doc["label"], "(1,2,3)");
    assert_eq!(frac(&doc["value"]), (1, 4));
    let doc = json(&["prob", "-G", "S3", "-g", "2", "-o", "json"]);
    assert_eq!(doc["label"], "(1,2)");
    assert_eq!(frac(&doc["value"]), (0, 1));
    let doc = json(&["prob", "-G", "S3", "-H", "gen[1]", "-g", "1", "--method", "char", "-o", "json"]);
    assert_eq!(frac(&doc["value"]), (1, 6));
    assert_eq!(doc["method"], "character");
    let doc = json(&["prob", "-G", "S3", "-n", "1", "-m", "2", "-g", "0", "--method", "class", "-o", "json"]);
    assert_eq!(frac(&doc["value"]), (11, 36));
    assert_eq!(doc["predicate"], "derived");
}

#[test]
fn chartab_q8() {
    let doc = json(&["chartab", "-G", "Q8", "-o", "json"]);
    let degrees: Vec<u64> = doc["irreducibles"].as_array().unwrap().iter().map(|i| i["degree"].as_u64().unwrap()).collect();
    assert_eq!(degrees, vec![1, 1, 1, 1, 2]);
}

#[test]
fn chartab_import_round_trip() {
    let out = commdeg(&["chartab", "-G", "A4", "-o", "json"]);
    let path = scratch("a4.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let again = commdeg(&["chartab", "-G", "A4", "-o", "json", "--import", path.to_str().unwrap()]);
    assert!(again.status.success());
    assert_eq!(out.stdout, again.stdout);

    let mut doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    doc["irreducibles"][1] = doc["irreducibles"][0].clone();
    let bad = scratch("a4_bad.json");
    std::fs::write(&bad, doc.to_string()).unwrap();
    assert_eq!(code(&["chartab", "-G", "A4", "--import", bad.to_str().unwrap()]), 4);
    assert_eq!(code(&["chartab", "-G", "S4", "--import", path.to_str().unwrap()]), 4);
}

#[test]
fn info_census() {
    let doc = json(&["info", "-G", "D4xC2", "-o", "json"]);
    assert_eq!(doc["order"], 16);
    assert_eq!(doc["class_count"], 10);
    assert_eq!(doc["center_order"], 4);
    assert_eq!(doc["elements"].as_array().unwrap().len(), 16);
}

#[test]
fn zeta_and_dist() {
    let doc = json(&["zeta", "-G", "S3", "-H", "gen[1]", "-g", "1", "-o", "json"]);
    assert_eq!(doc["zeta"][0]["count"], "3");
    let out = commdeg(&["dist", "-G", "S3", "-n", "2", "-m", "1", "-o", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("element_id,count\n0,162\n"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&["prob", "-G", "S3", "-n", "0"]), 2);
    assert_eq!(code(&["prob", "-G", "Z7"]), 2);
    assert_eq!(code(&["prob", "-G", "S3", "-H", "gen[x]"]), 2);
    assert_eq!(code(&["prob", "-G", "S3", "-g", "6"]), 2);
    assert_eq!(code(&["prob", "-G", "S3", "-n", "2", "--method", "char"]), 2);
    assert_eq!(code(&["prob", "-G", "S3", "-H", "gen[2]", "--method", "char"]), 2);
    assert_eq!(code(&["audit", "--claims", "EQ3,NOPE"]), 2);
    assert_eq!(code(&["audit", "--battery", "huge"]), 2);
    assert_eq!(code(&["prob"]), 2);
    let out = commdeg(&["prob", "-G", "S3", "-n", "0"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("-n"));
}

#[test]
fn computation_errors_exit_4() {
    assert_eq!(code(&["prob", "-G", "S4", "-n", "3", "-m", "3", "--method", "brute", "--brute-cap", "1000"]), 4);
    assert_eq!(code(&["info", "-G", "S4", "--max-order", "10"]), 4);
    let out = Command::new(env!("CARGO_BIN_EXE_commdeg"))
        .args(["info", "-G", "S4"])
        .env("COMMDEG_MAX_ORDER", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn audit_subset_is_deterministic() {
    let args = ["audit", "--battery", "default", "--claims", "EQ3,P3_m1", "--seed", "7", "-o", "json"];
    let a = commdeg(&args);
    let b = commdeg(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let doc: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["seed"], 7);
    assert_eq!(doc["hard_guarantee_violations"], 0);
    assert!(doc["summary"]["P3_m1[derived]"]["holds"].as_u64().unwrap() > 0);
    assert!(doc["summary"].get("C5").is_none());
}

#[test]
fn config_file_mirrors_flags() {
    let path = scratch("cfg.json");
    std::fs::write(&path, r#"{"group": "S3", "h": "full", "n": 1, "m": 1, "g": 1, "output": "json"}"#).unwrap();
    let doc = json(&["prob", "--config", path.to_str().unwrap()]);
    assert_eq!(frac(&doc["value"]), (1, 4));
    let doc = json(&["prob", "--config", path.to_str().unwrap(), "-g", "0"]);
    assert_eq!(frac(&doc["value"]), (1, 2));
    std::fs::write(&path, r#"{"gruop": "S3"}"#).unwrap();
    assert_eq!(code(&["prob", "--config", path.to_str().unwrap()]), 2);
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        vec!["chartab", "-G", "D5", "-o", "json", "--seed", "3"],
        vec!["profile", "-G", "A4", "-n", "2", "-m", "1", "-o", "csv"],
        vec!["info", "-G", "Q8"],
    ] {
        assert_eq!(commdeg(&args).stdout, commdeg(&args).stdout);
    }
}
