//! Two-level atom and the rotation-covariant qubit generator.

use std::f64::consts::SQRT_2;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lindblad::LindbladGenerator;
use crate::operator::{DensityMatrix, Operator};
use crate::space::{pauli_ops, HilbertSpace};
use crate::states::gibbs_state;
use crate::superop::{sandwich_matrix, Superoperator};
use crate::C64;

use super::Temperature;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelParams {
    pub omega: f64,
    pub eta: f64,
    pub temperature: Temperature,
    #[serde(default = "super::unit_hbar")]
    pub hbar: f64,
}

impl TwoLevelParams {
    pub fn new(omega: f64, eta: f64, temperature: Temperature) -> Self {
        TwoLevelParams {
            omega,
            eta,
            temperature,
            hbar: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        super::positive("omega", self.omega)?;
        super::positive("eta", self.eta)?;
        super::positive("hbar", self.hbar)?;
        self.temperature.validate()
    }

    pub fn space(&self) -> Result<HilbertSpace> {
        HilbertSpace::qubit().with_hbar(self.hbar)
    }

    pub fn occupation(&self) -> Result<f64> {
        self.temperature.occupation(self.hbar * self.omega)
    }

    /// `eta (2 N_beta + 1)`.
    pub fn total_rate(&self) -> Result<f64> {
        Ok(self.eta * (2.0 * self.occupation()? + 1.0))
    }
}

/// `H = (hbar omega / 2) sigma_z`, `sqrt(eta (N_beta + 1)) sigma_-`, `sqrt(eta N_beta) sigma_+`.
pub fn two_level_generator(p: &TwoLevelParams) -> Result<LindbladGenerator> {
    p.validate()?;
    let s = p.space()?;
    let ps = pauli_ops(&s)?;
    let nb = p.occupation()?;
    let h = ps.sigma_z.scale_real(p.hbar * p.omega / 2.0);
    let mut ls = vec![ps.sigma_minus.scale_real((p.eta * (nb + 1.0)).sqrt())];
    if nb > 0.0 {
        ls.push(ps.sigma_plus.scale_real((p.eta * nb).sqrt()));
    }
    LindbladGenerator::new(h, ls)
}

/// `exp(-beta hbar omega sigma_z / 2) / Z`, the ground state at zero temperature.
pub fn two_level_gibbs_state(p: &TwoLevelParams) -> Result<DensityMatrix> {
    let s = p.space()?;
    let ps = pauli_ops(&s)?;
    match p.temperature.beta(p.hbar * p.omega)? {
        Some(beta) => gibbs_state(&ps.sigma_z.scale_real(p.hbar * p.omega / 2.0), beta),
        None => DensityMatrix::pure(&s, &crate::states::basis(&s, 0)),
    }
}

/// Excited population and coherence `C = <sigma_-> = rho_10` at time `t`:
/// `P_e(t) = P_e e^{-eta_bar t} + N/(2N+1) (1 - e^{-eta_bar t})`,
/// `C(t) = C e^{-i omega t - eta_bar t / 2}`.
pub fn two_level_oracles(p: &TwoLevelParams, rho0: &DensityMatrix, t: f64) -> Result<(f64, C64)> {
    let nb = p.occupation()?;
    let rate = p.total_rate()?;
    let decay = (-rate * t).exp();
    let pe = rho0.population(1) * decay + nb / (2.0 * nb + 1.0) * (1.0 - decay);
    let c = rho0.matrix()[[1, 0]] * C64::new(-rate * t / 2.0, -p.omega * t).exp();
    Ok((pe, c))
}

/// Rates `c_m` for `m = -1, 0, +1` and `H = h sigma_z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotCovParams {
    pub c_minus: f64,
    pub c_zero: f64,
    pub c_plus: f64,
    pub h: f64,
    #[serde(default = "super::unit_hbar")]
    pub hbar: f64,
}

impl RotCovParams {
    pub fn new(c_minus: f64, c_zero: f64, c_plus: f64, h: f64) -> Self {
        RotCovParams {
            c_minus,
            c_zero,
            c_plus,
            h,
            hbar: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        super::nonnegative("c_minus", self.c_minus)?;
        super::nonnegative("c_zero", self.c_zero)?;
        super::nonnegative("c_plus", self.c_plus)?;
        super::positive("hbar", self.hbar)?;
        if !self.h.is_finite() {
            return Err(crate::Error::param("h", "must be finite"));
        }
        Ok(())
    }
}

/// `sum_m c_m D[T_1m]` with `T_11 = -sqrt2 sigma_+`, `T_10 = sigma_z`,
/// `T_1-1 = sqrt2 sigma_-`.
pub fn rotation_covariant_generator(p: &RotCovParams) -> Result<LindbladGenerator> {
    p.validate()?;
    let s = HilbertSpace::qubit().with_hbar(p.hbar)?;
    let ps = pauli_ops(&s)?;
    let tensors = [
        (p.c_plus, ps.sigma_plus.scale_real(-SQRT_2)),
        (p.c_zero, ps.sigma_z.clone()),
        (p.c_minus, ps.sigma_minus.scale_real(SQRT_2)),
    ];
    let ls = tensors
        .into_iter()
        .filter(|(c, _)| *c > 0.0)
        .map(|(c, t)| t.scale_real(c.sqrt()))
        .collect();
    LindbladGenerator::new(ps.sigma_z.scale_real(p.h), ls)
}

/// The same generator spelled out in Pauli form,
/// `-(i/hbar)[H, .] - (c_0/2)[sigma_z, [sigma_z, .]] + 2 c_-1 D[sigma_-] + 2 c_1 D[sigma_+]`,
/// flattened term by term.
pub fn rotation_covariant_explicit(p: &RotCovParams) -> Result<Superoperator> {
    p.validate()?;
    let s = HilbertSpace::qubit().with_hbar(p.hbar)?;
    let ps = pauli_ops(&s)?;
    let one: Array2<C64> = Array2::eye(2);
    let sw = |a: &Operator, b: &Operator| sandwich_matrix(a.matrix(), b.matrix());
    let left = |a: &Operator| sandwich_matrix(a.matrix(), &one);
    let right = |a: &Operator| sandwich_matrix(&one, a.matrix());
    let h = ps.sigma_z.scale_real(p.h);
    let z = &ps.sigma_z;
    let mut m = (left(&h) - right(&h)).mapv(|v| v * C64::new(0.0, -1.0 / p.hbar));
    // [z, [z, r]] = z z r - 2 z r z + r z z
    let zz = z.dot(z);
    let double = left(&zz) - sw(z, z).mapv(|v| v * 2.0) + right(&zz);
    m = m - double.mapv(|v| v * (p.c_zero / 2.0));
    for (c, l) in [(p.c_minus, &ps.sigma_minus), (p.c_plus, &ps.sigma_plus)] {
        let ld = l.dag();
        let ll = ld.dot(l);
        let d = sw(l, &ld) - (left(&ll) + right(&ll)).mapv(|v| v * 0.5);
        m = m + d.mapv(|v| v * (2.0 * c));
    }
    Superoperator::new(s, m)
}
