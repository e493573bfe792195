use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cutcactus::fixtures::Fixture;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cutcactus"))
}

fn fixture_file(dir: &Path, f: Fixture) -> PathBuf {
    let path = dir.join(format!("{}.json", f.name()));
    std::fs::write(&path, f.json()).unwrap();
    path
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().unwrap()
}

#[test]
fn build_f2_writes_a_four_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture_file(dir.path(), Fixture::F2);
    let out = dir.path().join("out.json");
    let dot = dir.path().join("out.dot");
    let status = run(bin().arg("build").arg("-i").arg(&input).args(["-m", "ends", "-o"]).arg(&out).arg("--dot").arg(&dot));
    assert_eq!(status.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["cactus"]["cycles"].as_array().unwrap().len(), 1);
    assert_eq!(doc["cactus"]["cycles"][0].as_array().unwrap().len(), 4);
    assert_eq!(doc["cactus"]["cut_map"].as_object().unwrap().len(), 6);
    assert!(doc["cactus"]["edges"].as_array().unwrap().iter().all(|e| e["pair"].is_null()));
    assert!(doc.get("blocks").is_none());
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("graph cactus {"));
}

#[test]
fn verify_f4_reports_no_crossings() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture_file(dir.path(), Fixture::F4);
    let output = run(bin().arg("verify").arg("-i").arg(&input).args(["-m", "ends"]));
    assert_eq!(output.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["instance"]["crossing_pairs"], 0);
    assert_eq!(report["instance"]["classes"], 1);
}

#[test]
fn thin_without_k_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture_file(dir.path(), Fixture::F2);
    let out = dir.path().join("out.json");
    let output = run(bin().arg("build").arg("-i").arg(&input).args(["-m", "thin", "-o"]).arg(&out));
    assert_eq!(output.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn unknown_mode_and_bad_input_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture_file(dir.path(), Fixture::F2);
    let out = dir.path().join("out.json");
    assert_eq!(run(bin().arg("build").arg("-i").arg(&input).args(["-m", "odd", "-o"]).arg(&out)).status.code(), Some(2));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"vertices":["a"],"edges":[{"id":"e","ends":["a","z"]}]}"#).unwrap();
    assert_eq!(run(bin().arg("build").arg("-i").arg(&bad).args(["-m", "ends", "-o"]).arg(&out)).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(run(bin().arg("verify").arg("-i").arg(&missing).args(["-m", "ends"])).status.code(), Some(2));
}

#[test]
fn thin_and_slim_builds_carry_blocks() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.json");
    let f6 = fixture_file(dir.path(), Fixture::F6);
    let status = run(bin().arg("build").arg("-i").arg(&f6).args(["-m", "thin", "-k", "2", "-o"]).arg(&out));
    assert_eq!(status.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["threshold"], 1);
    assert_eq!(doc["blocks"].as_array().unwrap().len(), 2);
    assert_eq!(doc["classes"][0]["representatives"], serde_json::json!([["bridge"]]));

    let f7 = fixture_file(dir.path(), Fixture::F7);
    let status = run(bin().arg("build").arg("-i").arg(&f7).args(["-m", "slim", "-k", "2", "-o"]).arg(&out));
    assert_eq!(status.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["classes"][0]["representatives"], serde_json::json!([["e2"], ["e3"]]));

    let k4 = fixture_file(dir.path(), Fixture::K4);
    let status = run(bin().arg("build").arg("-i").arg(&k4).args(["-m", "thin", "-k", "2", "-o"]).arg(&out));
    assert_eq!(status.status.code(), Some(2));
}

#[test]
fn random_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let status = run(bin().args(["random", "--vertices", "5", "--edges", "7", "--terminals", "3", "--seed", "1", "-o"]).arg(path));
        assert_eq!(status.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let status = run(bin().args(["random", "--vertices", "5", "--edges", "2", "--terminals", "3", "--seed", "1", "-o"]).arg(&a));
    assert_eq!(status.status.code(), Some(2));
}

#[test]
fn verify_reports_budget_overruns() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture_file(dir.path(), Fixture::F5);
    let output = run(bin().arg("verify").arg("-i").arg(&input).args(["-m", "ends", "--budget", "3"]));
    assert_eq!(output.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["checks"][0]["name"], "pipeline");
}
