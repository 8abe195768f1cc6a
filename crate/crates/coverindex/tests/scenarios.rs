//! Every shipped scenario must pass: the scenario library is the regression
//! map from named statements to verdicts. Runs must also be byte-for-byte
//! reproducible.

use coverindex::harness::{builtin_scenarios, run_scenario};

#[test]
fn all_builtin_scenarios_pass() {
    for config in builtin_scenarios() {
        let report = run_scenario(&config, None)
            .unwrap_or_else(|e| panic!("scenario '{}' failed to run: {}", config.name, e));
        for check in &report.checks {
            assert!(
                check.pass,
                "scenario '{}' {} [{}]: expected {}, computed {}",
                config.name, check.name, check.statement, check.expected, check.computed
            );
        }
        assert!(report.pass);
    }
}

#[test]
fn scenario_artifacts_are_deterministic() {
    let config = builtin_scenarios()
        .into_iter()
        .find(|s| s.name == "ladder-perturbed")
        .unwrap();
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    run_scenario(&config, Some(dir_a.path())).unwrap();
    run_scenario(&config, Some(dir_b.path())).unwrap();
    for file in ["verdict.json", "index_table.csv"] {
        let a = std::fs::read(dir_a.path().join(file)).unwrap();
        let b = std::fs::read(dir_b.path().join(file)).unwrap();
        assert_eq!(a, b, "{} differs between identical runs", file);
        assert!(!a.is_empty());
    }
}

#[test]
fn whyte_artifacts_are_deterministic() {
    let config = builtin_scenarios()
        .into_iter()
        .find(|s| s.name == "whyte-criterion")
        .unwrap();
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    run_scenario(&config, Some(dir_a.path())).unwrap();
    run_scenario(&config, Some(dir_b.path())).unwrap();
    let a = std::fs::read(dir_a.path().join("whyte.csv")).unwrap();
    let b = std::fs::read(dir_b.path().join("whyte.csv")).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.lines().count() > 50, "one row per tested set");
}

#[test]
fn config_errors_are_distinguished() {
    // unknown library
    let mut config = builtin_scenarios()[0].clone();
    config.base = Some(coverindex::harness::BaseRef::Library("no_such".into()));
    assert!(run_scenario(&config, None).is_err());
}
