//! Batch driver: named scenarios, each evaluating a fixed list of criteria
//! and emitting curve CSVs, residual rows and a run report.

mod config;
mod output;
mod scenarios;
mod validate;

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use crate::covariance::ResidualReport;
use crate::error::{Error, Result};

pub use config::{
    CovarianceSection, DhoCatSection, DhoSection, ExperimentConfig, InstrumentSection, JumpSection, LevySection,
    NamedTriplet, Numerics, PovmSection, QbmSection, QlbeSection, RotationSection, Scenario, TwoLevelSection,
    DEFAULTS_TOML,
};
pub use output::csv;
pub use validate::{validate, Diagnostic};

/// How a criterion value is judged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    AtMost(f64),
    AtLeast(f64),
    Within(f64, f64),
}

impl Bound {
    fn admits(&self, v: f64) -> bool {
        match *self {
            Bound::AtMost(b) => v <= b,
            Bound::AtLeast(b) => v >= b,
            Bound::Within(lo, hi) => v >= lo && v <= hi,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Criterion {
    pub name: String,
    pub value: f64,
    pub bound: Bound,
    pub pass: bool,
}

impl Criterion {
    pub fn new(name: impl Into<String>, value: f64, bound: Bound) -> Self {
        Criterion {
            name: name.into(),
            value,
            pass: bound.admits(value),
            bound,
        }
    }

    pub fn at_most(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Self::new(name, value, Bound::AtMost(tol))
    }

    pub fn at_least(name: impl Into<String>, value: f64, floor: f64) -> Self {
        Self::new(name, value, Bound::AtLeast(floor))
    }

    pub fn within(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        Self::new(name, value, Bound::Within(lo, hi))
    }
}

/// Everything a scenario produces before anything touches the disk.
#[derive(Debug, Clone, Default)]
pub struct ScenarioOutcome {
    pub criteria: Vec<Criterion>,
    pub diagnostics: BTreeMap<String, f64>,
    pub residuals: Vec<ResidualReport>,
    /// Text files (CSV, JSON lines): name and contents.
    pub files: Vec<(String, String)>,
    pub json: Vec<(String, serde_json::Value)>,
}

impl ScenarioOutcome {
    pub(crate) fn check(&mut self, c: Criterion) {
        self.criteria.push(c);
    }

    pub(crate) fn note(&mut self, key: impl Into<String>, v: f64) {
        self.diagnostics.insert(key.into(), v);
    }

    pub(crate) fn file(&mut self, name: impl Into<String>, contents: String) {
        self.files.push((name.into(), contents));
    }

    pub fn pass(&self) -> bool {
        self.criteria.iter().all(|c| c.pass)
    }

    pub fn criterion(&self, name: &str) -> Option<&Criterion> {
        self.criteria.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub scenario: Scenario,
    pub config_hash: String,
    pub pass: bool,
    pub wall_time_s: f64,
    pub criteria: Vec<Criterion>,
    pub diagnostics: BTreeMap<String, f64>,
}

pub fn list_scenarios() -> Vec<(Scenario, &'static str)> {
    Scenario::ALL.iter().map(|s| (*s, s.description())).collect()
}

/// Validate, then execute the configured scenario on `config.workers`
/// threads.
pub fn run_scenario(config: &ExperimentConfig) -> Result<ScenarioOutcome> {
    let diags = validate(config);
    if !diags.is_empty() {
        let msg: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
        return Err(Error::Config(msg.join("; ")));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let out = pool.install(|| scenarios::dispatch(config))?;
    let mut seen = std::collections::BTreeSet::new();
    for c in &out.criteria {
        assert!(seen.insert(c.name.as_str()), "criterion `{}` declared twice", c.name);
    }
    Ok(out)
}

/// Run the scenario and, when `out_dir` is given, write its CSVs,
/// `residuals.json`, any extra JSON documents and `report.json`.
pub fn run(config: &ExperimentConfig, out_dir: Option<&Path>) -> Result<RunReport> {
    let start = Instant::now();
    let outcome = run_scenario(config)?;
    let report = RunReport {
        scenario: config.scenario,
        config_hash: config.hash(),
        pass: outcome.pass(),
        wall_time_s: start.elapsed().as_secs_f64(),
        criteria: outcome.criteria.clone(),
        diagnostics: outcome.diagnostics.clone(),
    };
    if let Some(dir) = out_dir {
        output::write_all(dir, config, &outcome, &report)?;
    }
    Ok(report)
}
