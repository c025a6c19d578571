//! Runs every scenario at its defaults and prints one line per acceptance
//! criterion. Built without the libtest harness so the lines always show.

use std::collections::BTreeMap;
use std::process::ExitCode;

use covdyn::runner::{run_scenario, ExperimentConfig, Scenario, ScenarioOutcome};

struct Check {
    number: u32,
    title: &'static str,
    parts: &'static [(Scenario, &'static [&'static str])],
    limit_s: f64,
}

const CHECKS: &[Check] = &[
    Check {
        number: 1,
        title: "oscillator moments",
        parts: &[(Scenario::DhoMoments, &["a_mean_max_abs_error", "n_mean_max_abs_error", "fock_leakage"])],
        limit_s: 30.0,
    },
    Check {
        number: 2,
        title: "oscillator cat coherence",
        parts: &[(Scenario::DhoCat, &["coherence_max_abs_error", "fock_leakage"])],
        limit_s: 60.0,
    },
    Check {
        number: 3,
        title: "two-level Bloch equation",
        parts: &[(
            Scenario::TwoLevel,
            &[
                "excited_population_max_abs_error",
                "coherence_modulus_max_abs_error",
                "relaxation_rate_abs_error",
                "asymptote_abs_error",
            ],
        )],
        limit_s: 5.0,
    },
    Check {
        number: 4,
        title: "covariance audit",
        parts: &[(
            Scenario::CovarianceAudit,
            &["model_covariance_max_residual", "weyl_residual", "generalized_weyl_residual"],
        )],
        limit_s: 60.0,
    },
    Check {
        number: 5,
        title: "stationary Gibbs states",
        parts: &[(Scenario::QlbeGibbs, &["dho_gibbs_residual", "two_level_gibbs_residual", "qlbe_gibbs_residual"])],
        limit_s: 60.0,
    },
    Check {
        number: 6,
        title: "quantum Brownian motion",
        parts: &[
            (Scenario::QbmExact, &["lindblad_vs_four_term_max_abs_difference", "exact_vs_ode_trace_norm"]),
            (Scenario::QbmMoments, &["momentum_decay_rate_rel_error"]),
        ],
        limit_s: 180.0,
    },
    Check {
        number: 7,
        title: "linear Boltzmann structure",
        parts: &[(
            Scenario::QlbeGibbs,
            &["qlbe_trace_preservation", "structure_factor_detailed_balance", "population_column_sums"],
        )],
        limit_s: 60.0,
    },
    Check {
        number: 8,
        title: "measurement",
        parts: &[
            (
                Scenario::PovmJoint,
                &["frame_normalization_defect", "marginal_variance_product_rel_deviation", "instrument_dual_vs_povm"],
            ),
            (Scenario::InstrumentRepeat, &["von_neumann_repeatability", "posterior_reconfirmation"]),
        ],
        limit_s: 60.0,
    },
    Check {
        number: 9,
        title: "Levy decoherence",
        parts: &[(
            Scenario::LevySurface,
            &[
                "phi_at_origin",
                "phi_modulus_excess",
                "phi_multiplicativity",
                "bochner_min_eigenvalue",
                "gaussian_localization_equivalence",
            ],
        )],
        limit_s: 30.0,
    },
    Check {
        number: 10,
        title: "jump unraveling",
        parts: &[(
            Scenario::JumpConvergence,
            &[
                "qubit_max_standard_errors",
                "first_jump_mean_standard_errors",
                "qubit_trace_distance_sqrt_n",
                "dho_max_standard_errors",
                "error_scaling_slope",
            ],
        )],
        limit_s: 300.0,
    },
    Check {
        number: 11,
        title: "complete positivity",
        parts: &[(Scenario::CovarianceAudit, &["choi_min_eigenvalue", "transpose_control_min_eigenvalue"])],
        limit_s: 60.0,
    },
];

fn main() -> ExitCode {
    let mut results: BTreeMap<Scenario, (Result<ScenarioOutcome, String>, f64)> = BTreeMap::new();
    for check in CHECKS {
        for (s, _) in check.parts {
            results.entry(*s).or_insert_with(|| {
                let start = std::time::Instant::now();
                let r = run_scenario(&ExperimentConfig::for_scenario(*s)).map_err(|e| e.to_string());
                (r, start.elapsed().as_secs_f64())
            });
        }
    }

    let mut all = true;
    for check in CHECKS {
        let mut pass = true;
        let mut secs = 0.0;
        let mut details = Vec::new();
        for (s, names) in check.parts {
            let (r, t) = &results[s];
            secs += t;
            match r {
                Err(e) => {
                    pass = false;
                    details.push(format!("{s}: error {e}"));
                }
                Ok(out) => {
                    for n in *names {
                        match out.criterion(n) {
                            Some(c) => {
                                pass &= c.pass;
                                details.push(format!("{n}={:.3e}{}", c.value, if c.pass { "" } else { " FAIL" }));
                            }
                            None => {
                                pass = false;
                                details.push(format!("{n}=missing"));
                            }
                        }
                    }
                }
            }
        }
        let in_time = secs < check.limit_s;
        pass &= in_time;
        all &= pass;
        println!(
            "criterion {:>2} {:<28} {}  [{:.1} s / {:.0} s]  {}",
            check.number,
            check.title,
            if pass { "PASS" } else { "FAIL" },
            secs,
            check.limit_s,
            details.join(", ")
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
