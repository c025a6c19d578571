//! Damped harmonic oscillator, its cat-state decoherence, and the
//! shift-covariant many-photon family.

use ndarray::arr2;
use ndarray_linalg::Inverse;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lindblad::LindbladGenerator;
use crate::operator::{inner, DensityMatrix, Operator};
use crate::space::{fock_ops, HilbertSpace};
use crate::states::{coherent_state, gibbs_state};
use crate::C64;

use super::Temperature;

/// `N_beta = 1 / (exp(beta hbar omega) - 1)`.
pub fn thermal_occupation(omega: f64, beta: f64, hbar: f64) -> Result<f64> {
    let x = beta * hbar * omega;
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidTemperature(x));
    }
    Ok(1.0 / x.exp_m1())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DHOParams {
    pub omega: f64,
    pub eta: f64,
    pub temperature: Temperature,
    pub dim: usize,
    #[serde(default = "super::unit_hbar")]
    pub hbar: f64,
}

impl DHOParams {
    pub fn new(omega: f64, eta: f64, temperature: Temperature, dim: usize) -> Self {
        DHOParams {
            omega,
            eta,
            temperature,
            dim,
            hbar: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        super::positive("omega", self.omega)?;
        super::positive("eta", self.eta)?;
        super::positive("hbar", self.hbar)?;
        self.temperature.validate()?;
        HilbertSpace::fock(self.dim).map(|_| ())
    }

    pub fn space(&self) -> Result<HilbertSpace> {
        HilbertSpace::fock(self.dim)?.with_hbar(self.hbar)
    }

    pub fn occupation(&self) -> Result<f64> {
        self.temperature.occupation(self.hbar * self.omega)
    }

    /// `alpha exp(-(i omega + eta/2) t)`, the damped coherent amplitude.
    pub fn damped_amplitude(&self, alpha: C64, t: f64) -> C64 {
        alpha * C64::new(-self.eta * t / 2.0, -self.omega * t).exp()
    }
}

/// `H = hbar omega N`, `L_1 = sqrt(eta (N_beta + 1)) a`, `L_2 = sqrt(eta N_beta) a^dag`.
pub fn dho_generator(p: &DHOParams) -> Result<LindbladGenerator> {
    p.validate()?;
    shift_covariant_generator(&ShiftCovParams {
        eta_0: 0.0,
        eta_m: vec![p.eta],
        omega: p.omega,
        temperature: p.temperature,
        dim: p.dim,
        hbar: p.hbar,
    })
}

/// Gibbs state `exp(-beta hbar omega N) / Z` on the truncation (the vacuum
/// at zero temperature).
pub fn dho_gibbs_state(p: &DHOParams) -> Result<DensityMatrix> {
    number_gibbs(&p.space()?, p.temperature, p.hbar * p.omega)
}

fn number_gibbs(space: &HilbertSpace, temperature: Temperature, hbar_omega: f64) -> Result<DensityMatrix> {
    let n = fock_ops(space)?.number;
    match temperature.beta(hbar_omega)? {
        Some(beta) => gibbs_state(&n.scale_real(hbar_omega), beta),
        None => DensityMatrix::pure(space, &crate::states::basis(space, 0)),
    }
}

/// Closed forms `<a(t)> = <a> exp(-i omega t - eta t / 2)` and
/// `<N(t)> = <N> exp(-eta t) + N_beta (1 - exp(-eta t))`.
pub fn dho_moment_oracles(p: &DHOParams, a0: C64, n0: f64, t: f64) -> Result<(C64, f64)> {
    let nb = p.occupation()?;
    let decay = (-p.eta * t).exp();
    Ok((p.damped_amplitude(a0, t), n0 * decay + nb * (1.0 - decay)))
}

/// Zero-temperature suppression of the cat coherence,
/// `exp(-|alpha - beta|^2 (1 - exp(-eta t)) / 2)`.
pub fn dho_cat_coherence(alpha: C64, beta_amp: C64, eta: f64, t: f64) -> f64 {
    (-0.5 * (alpha - beta_amp).norm_sqr() * (1.0 - (-eta * t).exp())).exp()
}

/// Normalized `(|alpha> + |beta>)(<alpha| + <beta|)`. Also returns the
/// larger of the two coherent-state truncation losses.
pub fn cat_state(space: &HilbertSpace, alpha: C64, beta_amp: C64) -> Result<(DensityMatrix, f64)> {
    let (a, la) = coherent_state(space, alpha)?;
    let (b, lb) = coherent_state(space, beta_amp)?;
    let v = &a + &b;
    let n: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    Ok((DensityMatrix::pure(space, &v.mapv(|z| z / n.sqrt()))?, la.max(lb)))
}

/// Coherence coefficient `c` of `rho` written as
/// `m (|a><a| + |b><b|) + c m (|a><b| + |b><a|) + ...` in the span of the
/// coherent states `|a>, |b>`. Solves `R = G M G` with `G` the Gram matrix
/// and `R_ij = <v_i|rho|v_j>`, returning `M_01 / M_00`.
pub fn cat_coherence_numeric(rho: &DensityMatrix, a: C64, b: C64) -> Result<C64> {
    let space = rho.space();
    let (va, _) = coherent_state(space, a)?;
    let (vb, _) = coherent_state(space, b)?;
    let vs = [va, vb];
    let g = arr2(&[
        [inner(&vs[0], &vs[0]), inner(&vs[0], &vs[1])],
        [inner(&vs[1], &vs[0]), inner(&vs[1], &vs[1])],
    ]);
    let r = arr2(&[
        [rho.op().sandwich(&vs[0], &vs[0]), rho.op().sandwich(&vs[0], &vs[1])],
        [rho.op().sandwich(&vs[1], &vs[0]), rho.op().sandwich(&vs[1], &vs[1])],
    ]);
    let gi = g.inv()?;
    let m = gi.dot(&r).dot(&gi);
    Ok(m[[0, 1]] / m[[0, 0]])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftCovParams {
    /// Phase-damping rate.
    pub eta_0: f64,
    /// `eta_m` for `m = 1..=m_max`.
    pub eta_m: Vec<f64>,
    pub omega: f64,
    pub temperature: Temperature,
    pub dim: usize,
    #[serde(default = "super::unit_hbar")]
    pub hbar: f64,
}

impl ShiftCovParams {
    pub fn validate(&self) -> Result<()> {
        super::nonnegative("eta_0", self.eta_0)?;
        for &e in &self.eta_m {
            super::nonnegative("eta_m", e)?;
        }
        super::positive("omega", self.omega)?;
        super::positive("hbar", self.hbar)?;
        self.temperature.validate()?;
        HilbertSpace::fock(self.dim)?;
        if 2 * self.eta_m.len() >= self.dim {
            return Err(Error::TruncationTooSmall(format!(
                "{}-photon processes need dim > {}",
                self.eta_m.len(),
                2 * self.eta_m.len()
            )));
        }
        Ok(())
    }
}

/// Phase damping `sqrt(2 eta_0) N` plus `m`-photon emission
/// `sqrt(eta_m (N_beta + 1)^m) a^m` and absorption `sqrt(eta_m N_beta^m) a^dag^m`.
/// Zero rates contribute no operator.
pub fn shift_covariant_generator(p: &ShiftCovParams) -> Result<LindbladGenerator> {
    p.validate()?;
    let space = HilbertSpace::fock(p.dim)?.with_hbar(p.hbar)?;
    let ops = fock_ops(&space)?;
    let nb = p.temperature.occupation(p.hbar * p.omega)?;
    let h = ops.number.scale_real(p.hbar * p.omega);
    let mut ls = Vec::new();
    if p.eta_0 > 0.0 {
        ls.push(ops.number.scale_real((2.0 * p.eta_0).sqrt()));
    }
    let mut am = Operator::identity(&space);
    let mut adm = Operator::identity(&space);
    for (i, &eta) in p.eta_m.iter().enumerate() {
        let m = (i + 1) as i32;
        am = am.dot(&ops.a);
        adm = adm.dot(&ops.a_dagger);
        if eta == 0.0 {
            continue;
        }
        ls.push(am.scale_real((eta * (nb + 1.0).powi(m)).sqrt()));
        if nb > 0.0 {
            ls.push(adm.scale_real((eta * nb.powi(m)).sqrt()));
        }
    }
    LindbladGenerator::new(h, ls)
}

/// Gibbs state of `hbar omega N` for the shift-covariant family.
pub fn shift_covariant_gibbs_state(p: &ShiftCovParams) -> Result<DensityMatrix> {
    number_gibbs(&HilbertSpace::fock(p.dim)?.with_hbar(p.hbar)?, p.temperature, p.hbar * p.omega)
}
