use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn lenspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lenspec")).args(args).output().expect("spawn lenspec")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

const SMALL_REQUEST: &str = "\
field: cubic.field
ram_real: [0]
ram_primes: [\"5:0\"]
trace: a
k: 2
window: 30
height: 20000
zeta_cutoff: 1000
precision: 64
";

fn write_request(dir: &Path, body: &str) -> PathBuf {
    std::fs::copy(data("cubic.field"), dir.join("cubic.field")).unwrap();
    let p = dir.join("twins.request");
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn field_inspect_reports_discriminant() {
    let out = lenspec(&["field", "inspect", "--field", data("gaussian.field").to_str().unwrap()]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["discriminant"].to_string().trim_matches('"'), "-4");
}

#[test]
fn volume_of_gaussian_algebra() {
    let f = data("gaussian.field");
    let out = lenspec(&["volume", "--field", f.to_str().unwrap(), "--ram", "3:0", "--ram", "7:0", "--zeta-cutoff", "1e4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["norm_factor"], "384");
    let mid: f64 = v["volume"]["mid"].as_str().unwrap().parse().unwrap();
    assert!((mid - 117.2436).abs() < 0.05);
}

#[test]
fn construct_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let req = write_request(dir.path(), SMALL_REQUEST);
    let report = dir.path().join("report.json");
    let out = lenspec(&["twins", "construct", "--request", req.to_str().unwrap(), "--out", report.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert!(!v["tuples"].as_array().unwrap().is_empty());

    let out = lenspec(&["twins", "verify", "--report", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(json(&out)["ok"], true);

    let seq = dir.path().join("seq.json");
    let out = lenspec(&["--sequential", "twins", "construct", "--request", req.to_str().unwrap(), "--out", seq.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(std::fs::read(&report).unwrap(), std::fs::read(&seq).unwrap());
}

#[test]
fn tampered_report_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let req = write_request(dir.path(), SMALL_REQUEST);
    let out = lenspec(&["twins", "construct", "--request", req.to_str().unwrap()]);
    assert!(out.status.success());
    let mut v = json(&out);
    v["tuples"][0]["algebras"][0]["volume"]["norm_factor"] = Value::String("7".into());
    let report = dir.path().join("bad.json");
    std::fs::write(&report, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    let out = lenspec(&["twins", "verify", "--report", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["ok"], false);
}

#[test]
fn empty_window_exits_with_no_tuples_code() {
    let dir = tempfile::tempdir().unwrap();
    let req = write_request(dir.path(), &SMALL_REQUEST.replace("window: 30", "window: 0"));
    let out = lenspec(&["twins", "construct", "--request", req.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn failed_hypothesis_exits_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let body = SMALL_REQUEST.replace("ram_real: [0]", "ram_real: []").replace("[\"5:0\"]", "[\"5:0\", \"11:0\"]");
    let req = write_request(dir.path(), &body);
    let out = lenspec(&["twins", "construct", "--request", req.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("RealPlaceUnramified"));
}

#[test]
fn frobenius_of_a_single_prime() {
    let out = lenspec(&["primes", "frobenius", "--field", data("gaussian.field").to_str().unwrap(), "--ext", "radicand: 3", "--prime", "13:0"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["schema_version"], 1);
}

#[test]
fn bad_field_file_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.field");
    std::fs::write(&f, "poly: x^2 - 4\n").unwrap();
    let out = lenspec(&["field", "inspect", "--field", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}
