//! End-to-end CLI checks through the real binary.

use std::process::Command;

fn coverindex() -> Command {
    Command::new(env!("CARGO_BIN_EXE_coverindex"))
}

#[test]
fn list_scenarios_names_the_library() {
    let out = coverindex().arg("list-scenarios").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["ladder-periodic", "torus-analytic", "whyte-criterion"] {
        assert!(text.contains(name), "missing {}", name);
    }
}

#[test]
fn run_writes_artifacts_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = coverindex()
        .args(["run", "ladder-periodic", "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    assert!(dir.path().join("verdict.json").exists());
    assert!(dir.path().join("index_table.csv").exists());
    let csv = std::fs::read_to_string(dir.path().join("index_table.csv")).unwrap();
    assert!(csv.starts_with("g,value,provenance,gap"));
    assert_eq!(csv.lines().count(), 12, "header plus 11 inner copies");
}

#[test]
fn runs_are_byte_identical() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    for dir in [&dir_a, &dir_b] {
        let out = coverindex()
            .args(["run", "z5-cover", "--out-dir"])
            .arg(dir.path())
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
    }
    let a = std::fs::read(dir_a.path().join("verdict.json")).unwrap();
    let b = std::fs::read(dir_b.path().join("verdict.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn unknown_scenario_is_a_config_error() {
    let out = coverindex().args(["run", "no-such-scenario"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_round_trip() {
    // a config written to disk runs identically to the built-in it came from
    let dir = tempfile::tempdir().unwrap();
    let listing = coverindex().arg("list-scenarios").output().unwrap();
    assert!(listing.status.success());
    let config_path = dir.path().join("scenario.json");
    let scenario = coverindex::harness::builtin_scenario("ladder-facets").unwrap();
    std::fs::write(&config_path, scenario.to_json()).unwrap();
    let out = coverindex()
        .arg("run")
        .arg(&config_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
}

#[test]
fn subcommand_filters_checks() {
    let out = coverindex()
        .args(["whyte", "whyte-criterion"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("whyte-criterion"));
    assert!(!text.contains("stokes"));

    // the stokes filter on a scenario without stokes checks is an error
    let out = coverindex()
        .args(["stokes", "ladder-periodic"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = coverindex()
        .args(["index-table", "ladder-periodic"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn radius_flag_overrides_the_window() {
    let dir = tempfile::tempdir().unwrap();
    let out = coverindex()
        .args(["index-table", "ladder-periodic", "--radius", "8", "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("index_table.csv")).unwrap();
    assert_eq!(csv.lines().count(), 16, "header plus 15 inner copies");
}
