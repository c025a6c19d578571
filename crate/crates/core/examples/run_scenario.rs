//! Drive a named scenario through the runner, with overrides layered on the
//! built-in defaults, and write its outputs.

use covdyn::runner::{run, validate, ExperimentConfig};

fn main() -> covdyn::Result<()> {
    let cfg = ExperimentConfig::from_toml(
        r#"
        scenario = "two_level"
        [two_level]
        occupations = [0.0, 1.0]
        "#,
    )?;
    assert!(validate(&cfg).is_empty());
    let dir = std::env::temp_dir().join("covdyn-two-level");
    let report = run(&cfg, Some(&dir))?;
    for c in &report.criteria {
        println!("{} {:<36} {:.3e}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.value);
    }
    println!("config {} -> {}", &report.config_hash[..12], dir.display());
    Ok(())
}
