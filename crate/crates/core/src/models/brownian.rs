//! Quantum Brownian motion on a periodic 1D grid.

use std::f64::consts::PI;

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::lindblad::LindbladGenerator;
use crate::operator::{dagger, DensityMatrix, Operator};
use crate::space::{grid_ops, momentum_function, HilbertSpace};
use crate::superop::{sandwich_matrix, LinearMap, Superoperator};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QBMParams {
    pub mass: f64,
    pub eta: f64,
    pub beta: f64,
    pub space: HilbertSpace,
    pub include_friction: bool,
}

/// Coefficients of the double-commutator part,
/// `-(D_pp/hbar^2)[x,[x,.]] - (D_xx/hbar^2)[p,[p,.]]`, with free motion
/// `p^2/2M` when a mass is given.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diffusion {
    pub d_pp: f64,
    pub d_xx: f64,
    pub mass: Option<f64>,
}

impl QBMParams {
    pub fn new(space: HilbertSpace, mass: f64, eta: f64, beta: f64) -> Self {
        QBMParams {
            mass,
            eta,
            beta,
            space,
            include_friction: true,
        }
    }

    pub fn frictionless(mut self) -> Self {
        self.include_friction = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        super::positive("mass", self.mass)?;
        super::nonnegative("eta", self.eta)?;
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidTemperature(self.beta));
        }
        let grid = self.space.expect_grid()?;
        let lambda_th = self.thermal_length();
        if lambda_th < 2.0 * grid.dx {
            return Err(Error::ThermalLengthUnresolved { lambda_th, dx: grid.dx });
        }
        Ok(())
    }

    fn hbar(&self) -> f64 {
        self.space.hbar
    }

    /// `D_pp = eta M / beta`.
    pub fn d_pp(&self) -> f64 {
        self.eta * self.mass / self.beta
    }

    /// `D_xx = eta beta hbar^2 / 16 M`.
    pub fn d_xx(&self) -> f64 {
        self.eta * self.beta * self.hbar().powi(2) / (16.0 * self.mass)
    }

    /// `lambda_th = sqrt(beta hbar^2 / 4 M)`.
    pub fn thermal_length(&self) -> f64 {
        (self.beta * self.hbar().powi(2) / (4.0 * self.mass)).sqrt()
    }

    pub fn diffusion(&self) -> Diffusion {
        Diffusion {
            d_pp: self.d_pp(),
            d_xx: self.d_xx(),
            mass: Some(self.mass),
        }
    }
}

/// With friction: `H = p^2/2M + (eta/4){x, p}` and the single operator
/// `sqrt(eta) a`, `a = (x + i lambda_th^2 p / hbar) / (sqrt2 lambda_th)`.
/// Expanding the dissipator reproduces the friction term
/// `-(i eta / 2 hbar)[x, {p, .}]` together with both double commutators;
/// the cross terms leave `(eta/4){x, p}` rather than `(eta/2){x, p}` in the
/// Hamiltonian. Without friction: [`diffusion_generator`] with the same
/// coefficients.
pub fn qbm_generator(p: &QBMParams) -> Result<LindbladGenerator> {
    p.validate()?;
    if !p.include_friction {
        return diffusion_generator(&p.space, &p.diffusion());
    }
    let ops = grid_ops(&p.space)?;
    let hbar = p.hbar();
    let h0 = free_hamiltonian(&p.space, p.mass)?;
    let h = &h0 + &ops.x_hat.anticommutator(&ops.p_hat).scale_real(p.eta / 4.0);
    let lam = p.thermal_length();
    let a = (&ops.x_hat + &ops.p_hat.scale(C64::new(0.0, lam * lam / hbar))).scale_real(1.0 / (2f64.sqrt() * lam));
    LindbladGenerator::new(h, vec![a.scale_real(p.eta.sqrt())])
}

/// Lindblad operators `sqrt(2 D_pp) x / hbar` and `sqrt(2 D_xx) p / hbar`;
/// zero coefficients contribute no operator.
pub fn diffusion_generator(space: &HilbertSpace, d: &Diffusion) -> Result<LindbladGenerator> {
    super::nonnegative("d_pp", d.d_pp)?;
    super::nonnegative("d_xx", d.d_xx)?;
    let ops = grid_ops(space)?;
    let hbar = space.hbar;
    let h = match d.mass {
        Some(m) => {
            super::positive("mass", m)?;
            free_hamiltonian(space, m)?
        }
        None => Operator::zeros(space),
    };
    let mut ls = Vec::new();
    if d.d_pp > 0.0 {
        ls.push(ops.x_hat.scale_real((2.0 * d.d_pp).sqrt() / hbar));
    }
    if d.d_xx > 0.0 {
        ls.push(ops.p_hat.scale_real((2.0 * d.d_xx).sqrt() / hbar));
    }
    LindbladGenerator::new(h, ls)
}

fn free_hamiltonian(space: &HilbertSpace, mass: f64) -> Result<Operator> {
    momentum_function(space, |p| C64::new(p * p / (2.0 * mass), 0.0))
}

/// The generator in its four-term form,
/// `-(i/hbar)[H0, .] - (i eta / 2 hbar)[x, {p, .}] - (D_pp/hbar^2)[x,[x,.]] - (D_xx/hbar^2)[p,[p,.]]`.
#[derive(Debug, Clone)]
pub struct QbmFourTerm {
    h0: Operator,
    x: Operator,
    p: Operator,
    friction: f64,
    d_pp: f64,
    d_xx: f64,
}

pub fn qbm_four_term(p: &QBMParams) -> Result<QbmFourTerm> {
    p.validate()?;
    let ops = grid_ops(&p.space)?;
    Ok(QbmFourTerm {
        h0: free_hamiltonian(&p.space, p.mass)?,
        x: ops.x_hat,
        p: ops.p_hat,
        friction: if p.include_friction { p.eta } else { 0.0 },
        d_pp: p.d_pp(),
        d_xx: p.d_xx(),
    })
}

impl QbmFourTerm {
    fn hbar(&self) -> f64 {
        self.h0.space().hbar
    }

    /// Flattened term by term from left and right multiplications.
    pub fn superop(&self) -> Superoperator {
        let d = self.h0.dim();
        let one: Array2<C64> = Array2::eye(d);
        let hbar = self.hbar();
        let (h, x, p) = (self.h0.matrix(), self.x.matrix(), self.p.matrix());
        let l = |a: &Array2<C64>| sandwich_matrix(a, &one);
        let r = |a: &Array2<C64>| sandwich_matrix(&one, a);
        let s = |a: &Array2<C64>, b: &Array2<C64>| sandwich_matrix(a, b);
        let i = C64::new(0.0, 1.0);
        let mut m = (l(h) - r(h)).mapv(|v| -i * v / hbar);
        // [x, {p, r}] = x p r + x r p - p r x - r p x
        let xp = x.dot(p);
        let px = p.dot(x);
        let fr = l(&xp) + s(x, p) - s(p, x) - r(&px);
        m = m + fr.mapv(|v| -i * v * (self.friction / (2.0 * hbar)));
        for (a, c) in [(x, self.d_pp), (p, self.d_xx)] {
            let aa = a.dot(a);
            let dc = l(&aa) - s(a, a).mapv(|v| v * 2.0) + r(&aa);
            m = m - dc.mapv(|v| v * (c / (hbar * hbar)));
        }
        Superoperator::new(*self.h0.space(), m).expect("shape follows the space")
    }
}

impl LinearMap for QbmFourTerm {
    fn space(&self) -> &HilbertSpace {
        self.h0.space()
    }

    fn apply_to(&self, rho: &Operator) -> Operator {
        let hbar = self.hbar();
        let i = C64::new(0.0, 1.0);
        let mut out = self.h0.commutator(rho).scale(-i / hbar);
        out = &out + &self.x.commutator(&self.p.anticommutator(rho)).scale(-i * (self.friction / (2.0 * hbar)));
        for (a, c) in [(&self.x, self.d_pp), (&self.p, self.d_xx)] {
            out = &out - &a.commutator(&a.commutator(rho)).scale_real(c / (hbar * hbar));
        }
        out
    }
}

/// Exact solution of the frictionless equation. Along each diagonal
/// `x - y = r` of the freely evolved state, the Fourier component at
/// wavenumber `k` of the centre coordinate is multiplied by
/// `exp(-(D_pp/hbar^2)(r^2 t - r hbar k t^2 / M) - k^2 (D_xx + D_pp t^2 / 3M^2) t)`,
/// which is the position-representation convolution with a Gaussian kernel
/// and the momentum-representation Gaussian smoothing written in one step.
/// Separations use the minimal image, so the result is the continuum
/// solution whenever the state keeps away from the periodic seam.
pub fn qbm_exact_solution(space: &HilbertSpace, d: &Diffusion, rho0: &Operator, t: f64) -> Result<Operator> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let grid = space.expect_grid()?;
    if rho0.space() != space {
        return Err(Error::SpaceMismatch("state not on the given grid".into()));
    }
    let hbar = grid.hbar;
    let free = match d.mass {
        Some(m) => {
            let u = momentum_function(space, |p| C64::from_polar(1.0, -p * p * t / (2.0 * m * hbar)))?;
            u.dot(rho0).dot(&u.dag())
        }
        None => rho0.clone(),
    };
    let n = grid.n;
    let twiddle = Array1::from_shape_fn(n, |k| C64::from_polar(1.0, -2.0 * PI * k as f64 / n as f64));
    let hb2 = hbar * hbar;
    let mut out = Array2::<C64>::zeros((n, n));
    let mut f = vec![C64::new(0.0, 0.0); n];
    let mut fh = vec![C64::new(0.0, 0.0); n];
    for diag in 0..n {
        let cells = if diag <= n / 2 { diag as f64 } else { diag as f64 - n as f64 };
        let r = cells * grid.dx;
        for (y, v) in f.iter_mut().enumerate() {
            *v = free.matrix()[[(y + diag) % n, y]];
        }
        for (m, out_m) in fh.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (y, v) in f.iter().enumerate() {
                acc += v * twiddle[(m * y) % n];
            }
            let k = 2.0 * PI * grid.frequency(m) as f64 / grid.length();
            let q = match d.mass {
                Some(mass) => {
                    d.d_pp / hb2 * (r * r * t - r * hbar * k * t * t / mass)
                        + k * k * (d.d_xx + d.d_pp * t * t / (3.0 * mass * mass)) * t
                }
                None => d.d_pp / hb2 * r * r * t + k * k * d.d_xx * t,
            };
            *out_m = acc * (-q).exp();
        }
        for y in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for (m, v) in fh.iter().enumerate() {
                acc += v * twiddle[(m * y) % n].conj();
            }
            out[[(y + diag) % n, y]] = acc / n as f64;
        }
    }
    Ok(Operator::from_matrix(*space, out))
}

/// `<p_a|rho|p_b>` in discrete-Fourier bin order.
pub fn momentum_representation(rho: &Operator) -> Result<Array2<C64>> {
    let f = rho.space().expect_grid()?.dft();
    Ok(f.dot(rho.matrix()).dot(&dagger(&f)))
}

/// `<p(t)> = <p> e^{-eta t}` and, per degree of freedom,
/// `<E(t)> = <E> e^{-2 eta t} + (1 - e^{-2 eta t}) / 2 beta`.
pub fn qbm_moment_oracles(p: &QBMParams, rho0: &DensityMatrix, t: f64) -> Result<(f64, f64)> {
    let ops = grid_ops(&p.space)?;
    let e_op = free_hamiltonian(&p.space, p.mass)?;
    let p0 = rho0.expect(&ops.p_hat).re;
    let e0 = rho0.expect(&e_op).re;
    let d1 = (-p.eta * t).exp();
    let d2 = (-2.0 * p.eta * t).exp();
    Ok((p0 * d1, e0 * d2 + (1.0 - d2) / (2.0 * p.beta)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::{evolve_expm, evolve_ode};
    use crate::states::gaussian_packet;

    fn params(n: usize) -> QBMParams {
        QBMParams::new(HilbertSpace::centered_grid(n, 0.5).unwrap(), 1.0, 0.5, 4.0)
    }

    fn cat(space: &HilbertSpace, sep: f64, sigma: f64) -> DensityMatrix {
        let v = &gaussian_packet(space, -sep / 2.0, 0.3, sigma).unwrap() + &gaussian_packet(space, sep / 2.0, 0.0, sigma).unwrap();
        let n: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        DensityMatrix::pure(space, &v.mapv(|z| z / n.sqrt())).unwrap()
    }

    #[test]
    fn lindblad_form_equals_four_term() {
        let p = params(16);
        let a = qbm_generator(&p).unwrap().superop();
        let b = qbm_four_term(&p).unwrap().superop();
        assert!((&a - &b).max_abs() <= 1e-12);
        let q = p.frictionless();
        let a = qbm_generator(&q).unwrap().superop();
        let b = qbm_four_term(&q).unwrap().superop();
        assert!((&a - &b).max_abs() <= 1e-12);
    }

    #[test]
    fn four_term_action_matches_matrix() {
        let p = params(8);
        let ft = qbm_four_term(&p).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(1);
        let rho = DensityMatrix::random(&p.space, &mut rng);
        let x = ft.apply_to(rho.op());
        let y = ft.superop().apply(rho.op()).unwrap();
        assert!((&x - &y).max_abs() <= 1e-12);
    }

    #[test]
    fn coefficient_identities() {
        let p = params(16);
        let lam = p.thermal_length();
        assert!((p.d_pp() - p.eta / (4.0 * lam * lam)).abs() < 1e-15);
        assert!((p.d_xx() - p.eta * lam * lam / 4.0).abs() < 1e-15);
        let coarse = QBMParams::new(HilbertSpace::centered_grid(16, 1.0).unwrap(), 1.0, 0.5, 4.0);
        assert!(matches!(qbm_generator(&coarse), Err(Error::ThermalLengthUnresolved { .. })));
    }

    #[test]
    fn position_localization_collapse() {
        let s = HilbertSpace::centered_grid(32, 0.5).unwrap();
        let d = Diffusion {
            d_pp: 0.3,
            d_xx: 0.0,
            mass: None,
        };
        let rho0 = cat(&s, 3.0, 0.8);
        let t = 0.7;
        let ex = qbm_exact_solution(&s, &d, rho0.op(), t).unwrap();
        let g = s.grid().unwrap();
        for i in 0..32 {
            for j in 0..32 {
                let sep = g.separation(i, j);
                let want = rho0.matrix()[[i, j]] * (-0.3 * sep * sep * t).exp();
                assert!((ex.matrix()[[i, j]] - want).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn momentum_diffusion_keeps_momentum_diagonal() {
        let s = HilbertSpace::centered_grid(32, 0.5).unwrap();
        let d = Diffusion {
            d_pp: 0.0,
            d_xx: 0.4,
            mass: Some(1.0),
        };
        let rho0 = cat(&s, 3.0, 0.8);
        let ex = qbm_exact_solution(&s, &d, rho0.op(), 1.3).unwrap();
        let a = momentum_representation(rho0.op()).unwrap();
        let b = momentum_representation(&ex).unwrap();
        for k in 0..32 {
            assert!((a[[k, k]] - b[[k, k]]).norm() < 1e-13);
        }
    }

    #[test]
    fn exact_solution_matches_integration() {
        let p = params(64).frictionless();
        let gen = qbm_generator(&p).unwrap();
        let rho0 = cat(&p.space, 4.0, 1.0);
        let t = 0.5;
        let ex = qbm_exact_solution(&p.space, &p.diffusion(), rho0.op(), t).unwrap();
        let ode = evolve_ode(&gen, &rho0, t, 1e-9).unwrap();
        let diff = (&ex - ode.op()).trace_norm().unwrap();
        assert!(diff <= 1e-4, "trace-norm difference {diff}");
    }

    #[test]
    fn momentum_oracle_limits() {
        let p = params(32);
        let psi = gaussian_packet(&p.space, 0.0, 1.0, 1.5).unwrap();
        let rho = DensityMatrix::pure(&p.space, &psi).unwrap();
        let (p0, _) = qbm_moment_oracles(&p, &rho, 0.0).unwrap();
        let ops = grid_ops(&p.space).unwrap();
        assert!((p0 - rho.expect(&ops.p_hat).re).abs() < 1e-15);
        let (pinf, einf) = qbm_moment_oracles(&p, &rho, 1e3).unwrap();
        assert!(pinf.abs() < 1e-15 && (einf - 1.0 / 8.0).abs() < 1e-15);
        for t in [0.3, 1.0, 2.5] {
            let (pt, _) = qbm_moment_oracles(&p, &rho, t).unwrap();
            assert!((pt / p0 - (-p.eta * t).exp()).abs() < 1e-14);
        }
        let gen = qbm_generator(&p).unwrap();
        let half = evolve_expm(&gen, &rho, 2f64.ln() / p.eta).unwrap();
        let got = half.expect(&ops.p_hat).re;
        assert!((got / p0 - 0.5).abs() < 0.01, "ratio {}", got / p0);
    }
}
