use std::fs;

use covdyn::runner::{list_scenarios, run, run_scenario, validate, ExperimentConfig, Scenario};

#[test]
fn twelve_scenarios_listed() {
    let names: Vec<&str> = list_scenarios().iter().map(|(s, _)| s.name()).collect();
    assert_eq!(names.len(), 12);
    for n in ["dho_moments", "qlbe_gibbs", "covariance_audit", "jump_convergence"] {
        assert!(names.contains(&n), "{n} missing");
    }
}

#[test]
fn csvs_are_byte_identical_across_runs_and_workers() {
    for s in [Scenario::DhoMoments, Scenario::PovmJoint, Scenario::LevySurface] {
        let mut cfg = ExperimentConfig::for_scenario(s);
        let a = run_scenario(&cfg).unwrap();
        let b = run_scenario(&cfg).unwrap();
        cfg.workers = 3;
        let c = run_scenario(&cfg).unwrap();
        assert_eq!(a.files, b.files, "{s}");
        assert_eq!(a.files, c.files, "{s} changed with worker count");
    }
}

#[test]
fn jump_output_ignores_worker_count() {
    let mut cfg = ExperimentConfig::from_toml(
        "scenario = \"jump_convergence\"\n[jumps]\ntrajectories = 400\nsweep_start = 20\nsweep_doublings = 2\nreplicates = 2\n",
    )
    .unwrap();
    cfg.workers = 1;
    let a = run_scenario(&cfg).unwrap();
    cfg.workers = 4;
    let b = run_scenario(&cfg).unwrap();
    assert_eq!(a.files, b.files);
}

#[test]
fn dho_report_carries_moment_errors() {
    let r = run(&ExperimentConfig::for_scenario(Scenario::DhoMoments), None).unwrap();
    assert!(r.pass);
    let names: Vec<&str> = r.criteria.iter().map(|c| c.name.as_str()).collect();
    assert!(names.contains(&"a_mean_max_abs_error"));
    assert!(names.contains(&"n_mean_max_abs_error"));
}

#[test]
fn audit_writes_a_row_per_model_group_and_parameter() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig::for_scenario(Scenario::CovarianceAudit);
    let r = run(&cfg, Some(dir.path())).unwrap();
    assert!(r.pass);
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("residuals.json")).unwrap()).unwrap();
    assert_eq!(doc["config_hash"], cfg.hash());
    let rows = doc["residuals"].as_array().unwrap();
    let dho: Vec<_> = rows.iter().filter(|r| r["relation"] == "dho/u1_phase").collect();
    assert_eq!(dho.len(), cfg.covariance.phases.len());
    for r in rows {
        assert!(!r["relation"].as_str().unwrap().is_empty());
        assert!(r["params"].is_array());
        assert!(r["residual"].is_number());
    }
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["scenario"], "covariance_audit");
    assert_eq!(report["pass"], true);
}

#[test]
fn invalid_parameters_never_run() {
    let cfg = ExperimentConfig::from_toml("scenario = \"dho_moments\"\n[dho]\neta = -1.0\n").unwrap();
    let diags = validate(&cfg);
    assert_eq!(diags.len(), 1);
    assert_eq!(diags[0].field, "dho.eta");
    let err = run_scenario(&cfg).unwrap_err().to_string();
    assert!(err.contains("dho.eta"), "{err}");
}

#[test]
fn off_lattice_transfer_rejected_before_running() {
    let cfg = ExperimentConfig::from_toml("scenario = \"qlbe_gibbs\"\n[qlbe]\ntransfers = [1.5]\n").unwrap();
    let diags = validate(&cfg);
    assert!(diags.iter().any(|d| d.field == "qlbe.transfers" && d.message.contains("off-lattice")));
    assert!(run_scenario(&cfg).is_err());
}

#[test]
fn rotation_covariant_passes() {
    let out = run_scenario(&ExperimentConfig::for_scenario(Scenario::RotationCovariant)).unwrap();
    for c in &out.criteria {
        assert!(c.pass, "{} = {}", c.name, c.value);
    }
}
