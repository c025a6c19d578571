use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use covdyn::runner::{self, ExperimentConfig, Scenario};

#[derive(Parser)]
#[command(name = "covdyn", version, about = "Run covariant quantum dynamical semigroup scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a scenario and write its CSVs and JSON reports.
    Run {
        /// TOML file layered over the built-in defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Worker threads; overrides the config.
        #[arg(long)]
        workers: Option<usize>,
        /// Scenario name; overrides the config.
        scenario: Option<String>,
    },
    /// List scenarios.
    List,
    /// Check a config without running anything.
    Validate {
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Print the defaults file.
    Defaults,
}

fn load(config: Option<&PathBuf>) -> covdyn::Result<ExperimentConfig> {
    match config {
        Some(p) => ExperimentConfig::from_path(p),
        None => Ok(ExperimentConfig::defaults()),
    }
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            for (s, d) in runner::list_scenarios() {
                println!("{:<20} {d}", s.name());
            }
            ExitCode::SUCCESS
        }
        Command::Defaults => {
            print!("{}", runner::DEFAULTS_TOML);
            ExitCode::SUCCESS
        }
        Command::Validate { config } => {
            let cfg = match load(config.as_ref()) {
                Ok(c) => c,
                Err(e) => return usage(e),
            };
            let diags = runner::validate(&cfg);
            if diags.is_empty() {
                println!("ok: {} (config {})", cfg.scenario, cfg.hash());
                ExitCode::SUCCESS
            } else {
                for d in &diags {
                    eprintln!("{d}");
                }
                ExitCode::from(2)
            }
        }
        Command::Run {
            config,
            out,
            workers,
            scenario,
        } => {
            let mut cfg = match load(config.as_ref()) {
                Ok(c) => c,
                Err(e) => return usage(e),
            };
            if let Some(w) = workers {
                cfg.workers = w;
            }
            if let Some(s) = scenario {
                match s.parse::<Scenario>() {
                    Ok(s) => cfg.scenario = s,
                    Err(e) => return usage(e),
                }
            }
            let diags = runner::validate(&cfg);
            if !diags.is_empty() {
                for d in &diags {
                    eprintln!("{d}");
                }
                return ExitCode::from(2);
            }
            match runner::run(&cfg, Some(&out)) {
                Ok(report) => {
                    for c in &report.criteria {
                        println!("{:<4} {:<44} {:.3e}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.value);
                    }
                    println!("{} in {:.2} s -> {}", report.scenario, report.wall_time_s, out.display());
                    if report.pass {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
    }
}
