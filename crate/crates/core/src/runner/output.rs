use std::fs;
use std::path::Path;

use serde_json::json;

use super::{ExperimentConfig, RunReport, ScenarioOutcome};
use crate::error::Result;

/// CSV text with a header row; every value written with 17 significant
/// digits.
pub fn csv(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        let cells: Vec<String> = r.iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub(crate) fn write_all(dir: &Path, config: &ExperimentConfig, outcome: &ScenarioOutcome, report: &RunReport) -> Result<()> {
    fs::create_dir_all(dir)?;
    for (name, text) in &outcome.files {
        fs::write(dir.join(name), text)?;
    }
    for (name, value) in &outcome.json {
        fs::write(dir.join(name), serde_json::to_string_pretty(value)?)?;
    }
    let residuals = json!({
        "config_hash": report.config_hash,
        "scenario": config.scenario,
        "residuals": outcome.residuals,
    });
    fs::write(dir.join("residuals.json"), serde_json::to_string_pretty(&residuals)?)?;
    fs::write(dir.join("report.json"), serde_json::to_string_pretty(report)?)?;
    Ok(())
}
