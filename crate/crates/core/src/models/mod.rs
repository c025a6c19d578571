//! Concrete master equations and their closed-form solutions.

mod boltzmann;
mod brownian;
mod oscillator;
mod qubit;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use boltzmann::{
    dynamic_structure_factor_mb, energy_transfer, momentum_gibbs_state, population_rate_matrix, qlbe_generator,
    qlbe_no_kick_generator, QLBEParams, QlbeModel,
};
pub use brownian::{
    diffusion_generator, momentum_representation, qbm_exact_solution, qbm_four_term, qbm_generator,
    qbm_moment_oracles, Diffusion, QBMParams, QbmFourTerm,
};
pub use oscillator::{
    cat_coherence_numeric, cat_state, dho_cat_coherence, dho_generator, dho_gibbs_state, dho_moment_oracles,
    shift_covariant_generator, shift_covariant_gibbs_state, thermal_occupation, DHOParams, ShiftCovParams,
};
pub use qubit::{
    rotation_covariant_explicit, rotation_covariant_generator, two_level_generator, two_level_gibbs_state,
    two_level_oracles, RotCovParams, TwoLevelParams,
};

/// Bath temperature, given as an inverse temperature or directly as the
/// thermal occupation of the relevant mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Temperature {
    Zero,
    Beta(f64),
    Occupation(f64),
}

impl Temperature {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Temperature::Zero => Ok(()),
            Temperature::Beta(b) if b > 0.0 && b.is_finite() => Ok(()),
            Temperature::Beta(b) => Err(Error::InvalidTemperature(b)),
            Temperature::Occupation(n) if n >= 0.0 && n.is_finite() => Ok(()),
            Temperature::Occupation(n) => Err(Error::InvalidTemperature(n)),
        }
    }

    /// `N_beta` for a mode of energy `hbar_omega`.
    pub fn occupation(&self, hbar_omega: f64) -> Result<f64> {
        self.validate()?;
        match *self {
            Temperature::Zero => Ok(0.0),
            Temperature::Beta(b) => oscillator::thermal_occupation(hbar_omega, b, 1.0),
            Temperature::Occupation(n) => Ok(n),
        }
    }

    /// Inverse temperature; `None` at zero temperature.
    pub fn beta(&self, hbar_omega: f64) -> Result<Option<f64>> {
        self.validate()?;
        match *self {
            Temperature::Zero | Temperature::Occupation(0.0) => Ok(None),
            Temperature::Beta(b) => Ok(Some(b)),
            Temperature::Occupation(n) => Ok(Some((1.0 + 1.0 / n).ln() / hbar_omega)),
        }
    }
}

fn unit_hbar() -> f64 {
    1.0
}

pub(crate) fn positive(field: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(field, format!("must be positive, got {v}")))
    }
}

pub(crate) fn nonnegative(field: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(field, format!("must be nonnegative, got {v}")))
    }
}
