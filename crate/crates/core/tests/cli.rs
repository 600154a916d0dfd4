//! Runs the `pointerlab` binary end to end.

use std::path::Path;
use std::process::{Command, Output};

fn pointerlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pointerlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn selftest_passes() {
    let out = pointerlab(&["--selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(!stdout(&out).contains("FAIL"));
}

#[test]
fn pointer_sweep_reports_pure_coherent_states() {
    let out = pointerlab(&["pointer", "--lambda", "1+2i", "--steps", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = data_rows(&stdout(&out));
    assert_eq!(rows.len(), 5);
    for row in rows {
        let purity: f64 = row[4].parse().unwrap();
        assert!(purity >= 1.0 - 1e-8, "{row:?}");
    }
}

#[test]
fn kitten_rows_follow_time_grid() {
    let out = pointerlab(&["kitten", "--lambda", "2", "--tmax", "1", "--dt", "0.1"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = data_rows(&stdout(&out));
    assert_eq!(rows.len(), 10);
    let first: f64 = rows[0][1].parse().unwrap();
    assert!((first - 1.0).abs() < 1e-12, "coherence starts at one: {rows:?}");
}

#[test]
fn invalid_parameters_exit_with_two() {
    assert_eq!(pointerlab(&["kitten", "--lambda", "nan"]).status.code(), Some(2));
    assert_eq!(pointerlab(&["kitten", "--lambda", "2", "--dt", "-1"]).status.code(), Some(2));
    assert_eq!(pointerlab(&["lindblad", "--dt", "0.01", "--ntraj", "10"]).status.code(), Some(2));
    assert_eq!(pointerlab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn missing_scenario_exits_with_one() {
    let out = pointerlab(&["twobody", "/nonexistent/scenario.cfg"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn broken_scenario_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    std::fs::write(&path, "mass_a = heavy\n").unwrap();
    let out = pointerlab(&["twobody", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn out_writes_table_json_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("decay.csv");
    let out = pointerlab(&[
        "lindblad", "--tmax", "0.5", "--ntraj", "300", "--seed", "7", "--json",
        "--out", base.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let csv = std::fs::read_to_string(&base).unwrap();
    assert_eq!(data_rows(&csv).len(), 6);
    let manifest_path = sibling(&base, ".manifest.json");
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(manifest_path).unwrap()).unwrap();
    assert_eq!(manifest["subcommand"], "lindblad");
    assert_eq!(manifest["seed"], 7);
    assert_eq!(manifest["digest"].as_str().unwrap().len(), 64);
    let table: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(sibling(&base, ".json")).unwrap()).unwrap();
    assert!(table.is_object() || table.is_array());
}

#[test]
fn same_seed_same_output() {
    let args = ["lindblad", "--tmax", "0.3", "--ntraj", "200", "--seed", "11"];
    let a = stdout(&pointerlab(&args));
    let b = stdout(&pointerlab(&args));
    let strip = |s: &str| s.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&a), strip(&b));
}

fn sibling(path: &Path, suffix: &str) -> std::path::PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(suffix);
    name.into()
}
