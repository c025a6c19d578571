use std::fs;
use std::process::Command;

fn covdyn() -> Command {
    Command::new(env!("CARGO_BIN_EXE_covdyn"))
}

#[test]
fn list_prints_every_scenario() {
    let out = covdyn().arg("list").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 12);
    assert!(text.contains("levy_surface"));
}

#[test]
fn run_writes_csv_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = covdyn()
        .args(["run", "two_level", "--workers", "2", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["report.json", "residuals.json", "excited_population_n0.csv"] {
        assert!(dir.path().join(f).exists(), "{f} missing");
    }
    let csv = fs::read_to_string(dir.path().join("excited_population_n0.csv")).unwrap();
    assert!(csv.starts_with("t,analytic,numeric,abs_error\n"));
}

#[test]
fn validate_reports_field_and_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "scenario = \"dho_moments\"\n[dho]\neta = -0.5\n").unwrap();
    let out = covdyn().args(["validate", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dho.eta"));

    let out = covdyn().args(["run", "--config"]).arg(&cfg).arg("--out").arg(dir.path().join("o")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("o").exists());
}

#[test]
fn unknown_scenario_is_a_usage_error() {
    let out = covdyn().args(["run", "no_such_thing"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn defaults_validate() {
    let out = covdyn().arg("validate").output().unwrap();
    assert!(out.status.success());
}
