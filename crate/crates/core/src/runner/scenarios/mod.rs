mod audit;
mod boltzmann;
mod brownian;
mod jumps;
mod levy;
mod measure;
mod oscillator;
mod qubit;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{ExperimentConfig, Scenario, ScenarioOutcome};
use crate::error::Result;

pub(crate) fn dispatch(c: &ExperimentConfig) -> Result<ScenarioOutcome> {
    match c.scenario {
        Scenario::DhoMoments => oscillator::dho_moments(c),
        Scenario::DhoCat => oscillator::dho_cat(c),
        Scenario::TwoLevel => qubit::two_level(c),
        Scenario::RotationCovariant => qubit::rotation_covariant(c),
        Scenario::QbmMoments => brownian::qbm_moments(c),
        Scenario::QbmExact => brownian::qbm_exact(c),
        Scenario::QlbeGibbs => boltzmann::qlbe_gibbs(c),
        Scenario::PovmJoint => measure::povm_joint(c),
        Scenario::InstrumentRepeat => measure::instrument_repeat(c),
        Scenario::LevySurface => levy::levy_surface(c),
        Scenario::CovarianceAudit => audit::covariance_audit(c),
        Scenario::JumpConvergence => jumps::jump_convergence(c),
    }
}

/// Per-scenario stream so adding draws to one scenario never shifts another.
fn rng(c: &ExperimentConfig) -> ChaCha8Rng {
    let tag = c.scenario as u64 + 1;
    ChaCha8Rng::seed_from_u64(c.seed ^ (tag << 56))
}

fn linspace(t_max: f64, samples: usize) -> Vec<f64> {
    (0..samples).map(|k| t_max * k as f64 / (samples - 1) as f64).collect()
}

/// Rows `t, analytic, numeric, abs_error`.
fn curve_rows(ts: &[f64], analytic: &[f64], numeric: &[f64]) -> Vec<Vec<f64>> {
    ts.iter()
        .zip(analytic.iter().zip(numeric))
        .map(|(&t, (&a, &n))| vec![t, a, n, (a - n).abs()])
        .collect()
}

const CURVE_HEADER: [&str; 4] = ["t", "analytic", "numeric", "abs_error"];

fn max_of(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, f64::max)
}
