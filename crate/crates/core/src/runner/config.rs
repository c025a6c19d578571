//! Experiment configuration: a TOML document layered over the built-in
//! defaults file.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::levy::LevyTriplet;

/// The defaults file, verbatim.
pub const DEFAULTS_TOML: &str = include_str!("../../config/defaults.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    DhoMoments,
    DhoCat,
    TwoLevel,
    RotationCovariant,
    QbmMoments,
    QbmExact,
    QlbeGibbs,
    PovmJoint,
    InstrumentRepeat,
    LevySurface,
    CovarianceAudit,
    JumpConvergence,
}

impl Scenario {
    pub const ALL: [Scenario; 12] = [
        Scenario::DhoMoments,
        Scenario::DhoCat,
        Scenario::TwoLevel,
        Scenario::RotationCovariant,
        Scenario::QbmMoments,
        Scenario::QbmExact,
        Scenario::QlbeGibbs,
        Scenario::PovmJoint,
        Scenario::InstrumentRepeat,
        Scenario::LevySurface,
        Scenario::CovarianceAudit,
        Scenario::JumpConvergence,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::DhoMoments => "dho_moments",
            Scenario::DhoCat => "dho_cat",
            Scenario::TwoLevel => "two_level",
            Scenario::RotationCovariant => "rotation_covariant",
            Scenario::QbmMoments => "qbm_moments",
            Scenario::QbmExact => "qbm_exact",
            Scenario::QlbeGibbs => "qlbe_gibbs",
            Scenario::PovmJoint => "povm_joint",
            Scenario::InstrumentRepeat => "instrument_repeat",
            Scenario::LevySurface => "levy_surface",
            Scenario::CovarianceAudit => "covariance_audit",
            Scenario::JumpConvergence => "jump_convergence",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            Scenario::DhoMoments => "damped oscillator: <a(t)> and <N(t)> against closed forms, Fock leakage",
            Scenario::DhoCat => "damped oscillator: cat-state coherence suppression at zero temperature",
            Scenario::TwoLevel => "two-level Bloch equation: excited population and coherence, thermal asymptote",
            Scenario::RotationCovariant => "rotation-covariant qubit generator: Pauli form, reduction, dephasing, SO(2)",
            Scenario::QbmMoments => "quantum Brownian motion: momentum decay rate and energy relaxation",
            Scenario::QbmExact => "quantum Brownian motion: Lindblad vs four-term form, exact frictionless solution",
            Scenario::QlbeGibbs => "stationary Gibbs states; linear Boltzmann trace, detailed balance, rate matrix",
            Scenario::PovmJoint => "joint position-momentum POVM: frame defect, marginals, instrument dual",
            Scenario::InstrumentRepeat => "von Neumann instrument: repeatability and a-posteriori states",
            Scenario::LevySurface => "Levy decoherence: field invariants, Bochner check, Gaussian equivalence",
            Scenario::CovarianceAudit => "covariance of every model, Weyl relations, complete positivity",
            Scenario::JumpConvergence => "quantum-jump unraveling: averages against expm, 1/sqrt(n) scaling",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown scenario `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Numerics {
    pub ode_rel_tol: f64,
    pub leakage_limit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DhoSection {
    pub omega: f64,
    pub eta: f64,
    pub beta: f64,
    pub dim: usize,
    pub alpha: [f64; 2],
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DhoCatSection {
    pub omega: f64,
    pub eta: f64,
    pub dim: usize,
    pub amplitudes: Vec<f64>,
    pub eta_t: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoLevelSection {
    pub omega: f64,
    pub eta: f64,
    pub occupations: Vec<f64>,
    pub random_states: usize,
    pub max_rate_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RotationSection {
    pub c_minus: f64,
    pub c_zero: f64,
    pub c_plus: f64,
    pub h: f64,
    pub angles: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QbmSection {
    pub points: usize,
    pub dx: f64,
    pub mass: f64,
    pub eta: f64,
    pub beta: f64,
    pub superop_points: usize,
    pub cat_separation: f64,
    pub cat_sigma: f64,
    pub exact_times: Vec<f64>,
    pub packet_p0: f64,
    pub packet_sigma: f64,
    pub moment_samples: usize,
    pub moment_t_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QlbeSection {
    pub points: usize,
    pub dx: f64,
    pub test_mass: f64,
    pub gas_mass: f64,
    pub beta: f64,
    pub density: f64,
    pub amplitude: f64,
    pub transfers: Vec<f64>,
    pub random_states: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PovmSection {
    pub points: usize,
    pub dx: f64,
    pub sigma: f64,
    pub frame_tolerance: f64,
    pub rect_half_width: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstrumentSection {
    pub points: usize,
    pub dx: f64,
    pub sigma: f64,
    pub random_states: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedTriplet {
    pub name: String,
    #[serde(flatten)]
    pub triplet: LevyTriplet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevySection {
    pub points: usize,
    pub dx: f64,
    pub times: Vec<f64>,
    pub d_pp: f64,
    pub equivalence_time: f64,
    pub packet_sigma: f64,
    pub triplets: Vec<NamedTriplet>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CovarianceSection {
    pub fock_dim: usize,
    pub samples: usize,
    pub phases: Vec<f64>,
    pub shifts: Vec<i64>,
    pub choi_fock_dim: usize,
    pub choi_grid_points: usize,
    pub choi_times: Vec<f64>,
    pub weyl_points: usize,
    pub weyl_a_cells: i64,
    pub weyl_q_cells: i64,
    pub weyl_dim: usize,
    pub weyl_theta: f64,
    pub weyl_powers: Vec<usize>,
    pub shift_eta_0: f64,
    pub shift_eta_m: Vec<f64>,
    pub sample_sigma: f64,
    pub sample_spread: f64,
    pub sample_p_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JumpSection {
    pub trajectories: usize,
    pub dt_max: f64,
    pub sweep_start: usize,
    pub sweep_doublings: u32,
    pub replicates: usize,
    pub qubit_omega: f64,
    pub qubit_eta: f64,
    pub qubit_time: f64,
    pub dho_dim: usize,
    pub dho_omega: f64,
    pub dho_eta: f64,
    /// Fock levels of the equal-weight initial superposition.
    pub dho_levels: Vec<usize>,
    pub dho_time: f64,
}

/// Fully resolved configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub seed: u64,
    pub workers: usize,
    pub numerics: Numerics,
    pub dho: DhoSection,
    pub dho_cat: DhoCatSection,
    pub two_level: TwoLevelSection,
    pub rotation: RotationSection,
    pub qbm: QbmSection,
    pub qlbe: QlbeSection,
    pub povm: PovmSection,
    pub instrument: InstrumentSection,
    pub levy: LevySection,
    pub covariance: CovarianceSection,
    pub jumps: JumpSection,
}

impl ExperimentConfig {
    pub fn defaults() -> Self {
        Self::from_toml("").expect("defaults file parses")
    }

    /// Layer `text` over the defaults. Tables merge key by key; arrays and
    /// scalars replace.
    pub fn from_toml(text: &str) -> Result<Self> {
        let mut base: toml::Table = toml::from_str(DEFAULTS_TOML).map_err(|e| Error::Config(e.to_string()))?;
        let user: toml::Table = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        merge(&mut base, user);
        toml::Value::Table(base)
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn for_scenario(scenario: Scenario) -> Self {
        let mut c = Self::defaults();
        c.scenario = scenario;
        c
    }

    /// SHA-256 of the canonical JSON form of the resolved configuration.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

fn merge(base: &mut toml::Table, over: toml::Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_parse_and_override() {
        let d = ExperimentConfig::defaults();
        assert_eq!(d.dho.dim, 40);
        let c = ExperimentConfig::from_toml("scenario = \"two_level\"\n[dho]\neta = 0.5\n").unwrap();
        assert_eq!(c.scenario, Scenario::TwoLevel);
        assert_eq!(c.dho.eta, 0.5);
        assert_eq!(c.dho.dim, 40);
        assert_ne!(c.hash(), d.hash());
        assert_eq!(d.hash(), ExperimentConfig::defaults().hash());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(ExperimentConfig::from_toml("[dho]\nfoo = 1\n").is_err());
        assert!(ExperimentConfig::from_toml("scenario = \"nope\"\n").is_err());
        let bad_triplet = "[[levy.triplets]]\nname = \"g\"\nb = 0.0\nd = 0.1\nbogus = 3\n";
        assert!(ExperimentConfig::from_toml(bad_triplet).is_err());
    }

    #[test]
    fn scenario_names_round_trip() {
        for s in Scenario::ALL {
            assert_eq!(s.name().parse::<Scenario>().unwrap(), s);
        }
    }
}
