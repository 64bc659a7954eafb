//! End-to-end checks of the binary: canonical stdout, the exit-code
//! contract, and the falsifier path.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_tautrel"));
    c.arg("--no-cache");
    c
}

#[test]
fn compute_examples_are_canonical() {
    let out = bin().args(["compute", "wk", "--g", "1", "--d", "1"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1/24");

    let out = bin()
        .args(["compute", "pairing", "--class", "B", "--g", "0", "--n", "2", "--m", "2", "--b", "0,0"])
        .output()
        .unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "0");

    let out = bin()
        .args(["compute", "pairing", "--class", "Xi", "--g", "0", "--n", "1", "--m", "2", "--b", "0,0"])
        .output()
        .unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1 (u^0)");

    let out = bin()
        .args([
            "compute", "pairing", "--class", "Xi", "--g", "0", "--n", "1", "--m", "2", "--b",
            "0,0", "--json",
        ])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["poly"], "1");
    assert_eq!(v["u_exp"], 0);
    assert_eq!(v["degree"], 0);
}

#[test]
fn usage_errors_exit_2() {
    let out = bin().args(["compute", "wk", "--g", "0", "--d", "0,0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["verify", "aeqb", "--statement", "9"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn uncalibrated_base_exits_3() {
    // genus 3 kernels are beyond the shipped table
    let out = bin()
        .args(["compute", "kernel", "--g", "3", "--k", "1", "--d", "1", "--d0", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn empty_range_gives_empty_report() {
    let out = bin()
        .args(["verify", "master", "--max-g", "0", "--max-n", "0", "--max-m", "0"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "PASS 100% (0 instances)");
}

#[test]
fn range_beyond_calibration_exits_3() {
    let out = bin()
        .args(["verify", "master", "--max-g", "3", "--max-n", "2", "--max-m", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not calibrated"));
}

#[test]
fn verify_summary_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = bin()
        .args(["verify", "master", "--max-g", "1", "--max-n", "2", "--max-m", "2"])
        .arg("--report")
        .arg(&report)
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.starts_with("PASS 100%"), "stdout: {stdout}");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["summary"]["failed"], 0);
    assert!(v["calibration"]["excluded_instances"].as_array().unwrap().is_empty());
}

#[test]
fn falsified_calibration_trips_exit_1() {
    // a wrong (2,2) orbit coefficient survives the structural calibration
    // checks but falsifies A=B statement 2 at (g,n,b) = (2,2,2);
    // the verifier must return the mathematical-failure exit code
    let dir = tempfile::tempdir().unwrap();
    let oracle = dir.path().join("oracle.txt");
    let text = std::fs::read_to_string(data_path("oracle-constants.txt"))
        .unwrap()
        .replace("partition=2,2 value=7/2880", "partition=2,2 value=1/2880");
    std::fs::write(&oracle, text).unwrap();
    let basefile = dir.path().join("base.txt");
    let out = bin()
        .args(["calibrate", "--max-g", "2", "--max-k", "4"])
        .arg("--oracle")
        .arg(&oracle)
        .arg("--out")
        .arg(&basefile)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let out = bin()
        .arg("--constants")
        .arg(&basefile)
        .args(["verify", "aeqb", "--statement", "2", "--max-g", "2", "--max-n", "2", "--max-m", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("FAIL aeqb2"), "stderr: {stderr}");
}

#[test]
fn contradictory_oracle_exits_5() {
    let dir = tempfile::tempdir().unwrap();
    let oracle = dir.path().join("oracle.txt");
    let mut text = std::fs::read_to_string(data_path("oracle-constants.txt")).unwrap();
    text.push_str("free g=1 k=1 partition=2 value=1/23 source=other\n");
    std::fs::write(&oracle, text).unwrap();
    let out = bin()
        .args(["calibrate"])
        .arg("--oracle")
        .arg(&oracle)
        .arg("--out")
        .arg(dir.path().join("base.txt"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(5));
}

fn data_path(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}
