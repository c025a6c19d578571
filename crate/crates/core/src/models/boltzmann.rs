//! Quantum linear Boltzmann equation for a test particle in a
//! Maxwell-Boltzmann gas, on a periodic 1D grid.

use std::f64::consts::PI;

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::lindblad::LindbladGenerator;
use crate::operator::{dagger, DensityMatrix, Operator};
use crate::space::{from_momentum_diagonal, momentum_function, position_function, HilbertSpace};
use crate::states::gibbs_state;
use crate::superop::Superoperator;
use crate::C64;

/// `S_MB(q, E) = sqrt(beta m / 2 pi) / |q| exp(-(beta / 8 m) (2 m E + q^2)^2 / q^2)`.
pub fn dynamic_structure_factor_mb(q: f64, e: f64, gas_mass: f64, beta: f64) -> Result<f64> {
    if q == 0.0 {
        return Err(Error::ZeroMomentumTransfer);
    }
    let s = 2.0 * gas_mass * e + q * q;
    Ok((beta * gas_mass / (2.0 * PI)).sqrt() / q.abs() * (-(beta / (8.0 * gas_mass)) * s * s / (q * q)).exp())
}

/// `E(q, p) = (p + q)^2 / 2M - p^2 / 2M`.
pub fn energy_transfer(q: f64, p: f64, mass: f64) -> f64 {
    ((p + q) * (p + q) - p * p) / (2.0 * mass)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QLBEParams {
    pub test_mass: f64,
    pub gas_mass: f64,
    pub beta: f64,
    /// Gas particles per unit length.
    pub density: f64,
    /// Momentum transfers and their scattering amplitudes.
    pub t_tilde: Vec<(f64, C64)>,
    pub space: HilbertSpace,
}

impl QLBEParams {
    /// Constant amplitude on the transfers `m dp` for each listed `m`.
    pub fn contact(space: HilbertSpace, test_mass: f64, gas_mass: f64, beta: f64, density: f64, cells: &[i64], amplitude: f64) -> Result<Self> {
        let dp = space.expect_grid()?.dp();
        Ok(QLBEParams {
            test_mass,
            gas_mass,
            beta,
            density,
            t_tilde: cells.iter().map(|&m| (m as f64 * dp, C64::new(amplitude, 0.0))).collect(),
            space,
        })
    }

    pub fn validate(&self) -> Result<Vec<i64>> {
        super::positive("test_mass", self.test_mass)?;
        super::positive("gas_mass", self.gas_mass)?;
        super::positive("density", self.density)?;
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidTemperature(self.beta));
        }
        let grid = self.space.expect_grid()?;
        self.t_tilde
            .iter()
            .map(|&(q, _)| {
                if q == 0.0 {
                    return Err(Error::ZeroMomentumTransfer);
                }
                grid.momentum_cells(q).ok_or(Error::OffLatticeMomentumTransfer(q))
            })
            .collect()
    }
}

/// Generator together with the share of the transition table that was
/// dropped because `p + q` left the momentum lattice.
#[derive(Debug, Clone)]
pub struct QlbeModel {
    pub generator: LindbladGenerator,
    /// Dropped rate over total rate, summed over all lattice momenta and transfers.
    pub dropped_weight: f64,
    pub transfers: Vec<i64>,
}

impl QlbeModel {
    pub fn superop(&self) -> Superoperator {
        self.generator.superop()
    }
}

/// `L[rho] = -(i/hbar)[p^2/2M, rho] + sum_q c_q (L_q rho L_q^dag - 1/2 {L_q^dag L_q, rho})`
/// with `L_q = e^{i q x / hbar} sqrt(S(q, E(q, p)))` and
/// `c_q = (2 pi / hbar)(2 pi hbar) n |t(q)|^2`. Transitions that would
/// leave the lattice are removed from both the gain and loss terms, so the
/// generator stays trace preserving.
pub fn qlbe_generator(p: &QLBEParams) -> Result<QlbeModel> {
    build(p, true)
}

/// The same rates without the momentum kick: `L_q = sqrt(S(q, E(q, p)))`.
/// Populations then follow a diagonal-preserving dephasing equation.
pub fn qlbe_no_kick_generator(p: &QLBEParams) -> Result<QlbeModel> {
    build(p, false)
}

fn build(p: &QLBEParams, kick: bool) -> Result<QlbeModel> {
    let transfers = p.validate()?;
    let grid = p.space.expect_grid()?;
    let hbar = grid.hbar;
    let n = grid.n;
    let half = (n / 2) as i64;
    let h0 = momentum_function(&p.space, |k| C64::new(k * k / (2.0 * p.test_mass), 0.0))?;
    let mut ls = Vec::with_capacity(transfers.len());
    let (mut dropped, mut total) = (0.0, 0.0);
    for (&(q, amp), &m) in p.t_tilde.iter().zip(&transfers) {
        let c = (2.0 * PI / hbar) * (2.0 * PI * hbar) * p.density * amp.norm_sqr();
        let mut diag = Array1::<C64>::zeros(n);
        for (k, d) in diag.iter_mut().enumerate() {
            let pk = grid.p(k);
            let s = dynamic_structure_factor_mb(q, energy_transfer(q, pk, p.test_mass), p.gas_mass, p.beta)?;
            let target = grid.frequency(k) + m;
            total += c * s;
            if (-half..half).contains(&target) {
                *d = C64::new((c * s).sqrt(), 0.0);
            } else {
                dropped += c * s;
            }
        }
        let root = Operator::from_matrix(p.space, from_momentum_diagonal(&grid, &diag));
        let l = if kick {
            position_function(&p.space, |x| C64::from_polar(1.0, q * x / hbar))?.dot(&root)
        } else {
            root
        };
        ls.push(l);
    }
    Ok(QlbeModel {
        generator: LindbladGenerator::new(h0, ls)?,
        dropped_weight: if total > 0.0 { dropped / total } else { 0.0 },
        transfers,
    })
}

/// `exp(-beta p^2 / 2M) / Z`.
pub fn momentum_gibbs_state(space: &HilbertSpace, mass: f64, beta: f64) -> Result<DensityMatrix> {
    let h0 = momentum_function(space, |k| C64::new(k * k / (2.0 * mass), 0.0))?;
    gibbs_state(&h0, beta)
}

/// `R[a][b] = <p_a| L[|p_b><p_b|] |p_a>`, the rate matrix of momentum
/// populations, in discrete-Fourier bin order.
pub fn population_rate_matrix(gen: &LindbladGenerator) -> Result<Array2<f64>> {
    let grid = gen.space().expect_grid()?;
    let f = grid.dft();
    let fd = dagger(&f);
    let n = grid.n;
    let mut r = Array2::zeros((n, n));
    for b in 0..n {
        let col = fd.column(b).to_owned();
        let proj = Operator::outer(gen.space(), &col, &col);
        let out = f.dot(gen.apply(&proj).matrix()).dot(&fd);
        for a in 0..n {
            r[[a, b]] = out[[a, a]].re;
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covariance::{covariance_residual, localized_samples, Group, UnitaryRep};

    fn model_params() -> QLBEParams {
        let s = HilbertSpace::centered_grid(64, 0.5).unwrap();
        QLBEParams::contact(s, 1.0, 0.5, 2.0, 0.05, &[-2, -1, 1, 2], 1.0).unwrap()
    }

    #[test]
    fn structure_factor_properties() {
        let (m, beta) = (1.0, 2.0);
        let q = 1.3;
        let peak = dynamic_structure_factor_mb(q, -q * q / (2.0 * m), m, beta).unwrap();
        assert!((peak - (beta * m / (2.0 * PI)).sqrt() / q).abs() < 1e-15);
        let a = dynamic_structure_factor_mb(1.0, 0.7, m, beta).unwrap();
        let b = dynamic_structure_factor_mb(1.0, -0.7, m, beta).unwrap();
        assert!((a / b - (-beta * 0.7f64).exp()).abs() < 1e-12);
        assert!(dynamic_structure_factor_mb(1.0, 0.7, m, 400.0).unwrap() < 1e-30);
        assert!(matches!(dynamic_structure_factor_mb(0.0, 1.0, m, beta), Err(Error::ZeroMomentumTransfer)));
    }

    #[test]
    fn off_lattice_transfer_rejected() {
        let mut p = model_params();
        p.t_tilde[2].0 *= 1.5;
        assert!(matches!(qlbe_generator(&p), Err(Error::OffLatticeMomentumTransfer(_))));
    }

    #[test]
    fn trace_and_population_sector() {
        let p = model_params();
        let model = qlbe_generator(&p).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(2);
        for _ in 0..5 {
            let rho = DensityMatrix::random(&p.space, &mut rng);
            assert!(model.generator.apply(rho.op()).trace().norm() <= 1e-12);
        }
        let r = population_rate_matrix(&model.generator).unwrap();
        for b in 0..64 {
            assert!(r.column(b).sum().abs() <= 1e-12);
        }
        assert!(model.dropped_weight > 0.0 && model.dropped_weight < 1e-6);
    }

    #[test]
    fn gibbs_residual_small() {
        let p = model_params();
        let model = qlbe_generator(&p).unwrap();
        let w = momentum_gibbs_state(&p.space, p.test_mass, p.beta).unwrap();
        assert!(model.generator.apply(w.op()).trace_norm().unwrap() <= 1e-3);
    }

    #[test]
    fn no_kick_is_diagonal_preserving() {
        let p = model_params();
        let model = qlbe_no_kick_generator(&p).unwrap();
        let r = population_rate_matrix(&model.generator).unwrap();
        assert!(r.iter().all(|v| v.abs() <= 1e-12));
        let f = p.space.grid().unwrap().dft();
        let diag = Array1::from_shape_fn(64, |k| C64::new(1.0 + k as f64, 0.0));
        let x = Operator::from_matrix(p.space, from_momentum_diagonal(&p.space.grid().unwrap(), &diag));
        let out = f.dot(model.generator.apply(&x).matrix()).dot(&dagger(&f));
        assert!(crate::operator::max_abs(&out) <= 1e-12);
    }

    #[test]
    fn translation_covariant() {
        let p = model_params();
        let model = qlbe_generator(&p).unwrap();
        let rep = UnitaryRep::new(Group::Translation1d, &p.space).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(8);
        let samples = localized_samples(&p.space, 5, 1.0, 2.0, 1.0, &mut rng).unwrap();
        let res = covariance_residual(&model.generator, &rep, &[0.5, 1.0, 2.5], &samples).unwrap();
        assert!(res <= 1e-10, "residual {res}");
    }
}
