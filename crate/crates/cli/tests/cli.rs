//! End-to-end tests of the CLI contract: JSON output shapes, exit codes,
//! byte-identical stdout, and case replay.

use std::io::Write;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sjtheta"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_temp(content: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(content.as_bytes()).unwrap();
    f
}

#[test]
fn eval_base_point() {
    let f = write_temp(r#"{"omega": [[[0.0, 1.0]]], "z": [[0.0]]}"#);
    let out = run(&["eval", "--point", f.path().to_str().unwrap(), "--tol", "1e-12"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let re = v["value"][0].as_f64().unwrap();
    assert!((re - 1.086434811213308).abs() < 1e-12);
    assert!(v["tail_bound"].as_f64().unwrap() < 1e-12);
    assert!(v["terms"].as_u64().unwrap() >= 1);
}

#[test]
fn eval_rejects_malformed_json() {
    let f = write_temp(r#"{"omega": [[[0.0"#);
    let out = run(&["eval", "--point", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_rejects_invalid_point() {
    // Im Omega negative definite.
    let f = write_temp(r#"{"omega": [[[0.0, -1.0]]], "z": [[0.0]]}"#);
    let out = run(&["eval", "--point", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("positive definite"), "stderr: {msg}");
}

#[test]
fn reduce_translation_case() {
    let f = write_temp(r#"{"omega": [[[5.0, 1.0]]], "z": [[0.0]]}"#);
    let out = run(&["reduce", "--point", f.path().to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["steps"].as_array().unwrap().len(), 1);
    assert_eq!(v["steps"][0]["kind"], "translate_omega");
    assert_eq!(v["steps"][0]["b"][0][0], 4);
    assert!((v["multiplier"][0].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn reduce_inversion_case() {
    let f = write_temp(r#"{"omega": [[[0.0, 0.5]]], "z": [[0.0]]}"#);
    let out = run(&["reduce", "--point", f.path().to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["steps"].as_array().unwrap().len(), 1);
    assert_eq!(v["steps"][0]["kind"], "invert");
    assert!((v["reduced_point"]["omega"][0][0][1].as_f64().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn reduce_noop_case() {
    let f = write_temp(r#"{"omega": [[[0.2, 1.1]]], "z": [[[0.1, 0.05]]]}"#);
    let out = run(&["reduce", "--point", f.path().to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["steps"].as_array().unwrap().is_empty());
}

#[test]
fn verify_theorem_seed7() {
    let out = run(&["verify", "--suite", "theorem", "--seed", "7", "--count", "50", "--tol", "1e-6"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["passes"], 50);
    assert!(v["report"]["failures"].as_array().unwrap().is_empty());
}

#[test]
fn verify_unknown_suite() {
    let out = run(&["verify", "--suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_count_zero_is_vacuous() {
    let out = run(&["verify", "--suite", "theorem", "--count", "0"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["count"], 0);
    assert_eq!(v["report"]["cases"].as_array().unwrap().len(), 0);
}

#[test]
fn stdout_is_byte_identical_across_runs() {
    let args = ["verify", "--suite", "cocycle", "--seed", "3", "--count", "8", "--g", "2"];
    let out1 = run(&args);
    let out2 = run(&args);
    assert!(out1.status.success());
    assert_eq!(out1.stdout, out2.stdout);
}

#[test]
fn replay_reruns_one_case_identically() {
    let out = run(&["verify", "--suite", "theorem", "--seed", "11", "--count", "4"]);
    assert!(out.status.success());
    let full: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let case2 = full["report"]["cases"][2].clone();

    let record = serde_json::json!({
        "suite": "theorem", "g": 1, "m": 1, "seed": 11,
        "tol": 1e-9, "word_len": 8, "index": 2
    });
    let f = write_temp(&record.to_string());
    let replayed = run(&["verify", "--replay", f.path().to_str().unwrap()]);
    assert!(replayed.status.success());
    let v: serde_json::Value = serde_json::from_slice(&replayed.stdout).unwrap();
    assert_eq!(v["report"]["cases"][0]["detail"], case2["detail"]);
    assert_eq!(v["report"]["cases"][0]["pass"], case2["pass"]);
}

#[test]
fn hecke_subcommand() {
    let out = run(&["hecke", "--a", "1", "--b", "0", "--c", "4", "--d", "1", "--tau", "0.0,1.0"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert!(v["defect"].as_f64().unwrap() < 1e-8);

    // Not in Gamma_0(4).
    let out = run(&["hecke", "--a", "1", "--b", "0", "--c", "2", "--d", "1"]);
    assert_eq!(out.status.code(), Some(2));
}
