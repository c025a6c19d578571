//! Translation-covariant decoherence with a classical label: Lévy triplets,
//! the characteristic exponent and its decoherence factor.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{hermitian_part, min_eigenvalue_of, DensityMatrix, Operator};
use crate::C64;

/// Drift `b`, Gaussian coefficient `D` and a finite jump list of
/// `(q, weight)` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevyTriplet {
    pub b: f64,
    pub d: f64,
    #[serde(default)]
    pub jumps: Vec<(f64, f64)>,
    #[serde(default = "unit_hbar")]
    pub hbar: f64,
}

fn unit_hbar() -> f64 {
    1.0
}

impl LevyTriplet {
    pub fn gaussian(d: f64) -> Self {
        LevyTriplet {
            b: 0.0,
            d,
            jumps: Vec::new(),
            hbar: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.d >= 0.0) {
            return Err(Error::param("d", format!("Gaussian coefficient must be nonnegative, got {}", self.d)));
        }
        if !self.b.is_finite() {
            return Err(Error::param("b", "drift must be finite"));
        }
        if !(self.hbar > 0.0) {
            return Err(Error::param("hbar", "must be positive"));
        }
        for &(q, w) in &self.jumps {
            if !(w >= 0.0) || !q.is_finite() {
                return Err(Error::param("jumps", format!("invalid jump ({q}, {w})")));
            }
        }
        Ok(())
    }

    /// `sum_q w q^2 / (1 + q^2)`, finite for any finite list.
    pub fn levy_integral(&self) -> f64 {
        self.jumps.iter().map(|&(q, w)| w * q * q / (1.0 + q * q)).sum()
    }
}

/// `Psi(x) = i b x + D x^2 / 2 - sum_q w (e^{i q x / hbar} - 1 - (i / hbar) q x / (1 + q^2))`.
pub fn characteristic_exponent(trip: &LevyTriplet, x: f64) -> C64 {
    let h = trip.hbar;
    let mut psi = C64::new(0.5 * trip.d * x * x, trip.b * x);
    for &(q, w) in &trip.jumps {
        let phase = C64::from_polar(1.0, q * x / h);
        psi -= (phase - 1.0 - C64::new(0.0, q * x / (h * (1.0 + q * q)))) * w;
    }
    psi
}

/// `Phi(t, x) = exp(-t Psi(x))`.
///
/// The phase `t Im Psi` is formed exactly and reduced modulo `2 pi` in
/// extended precision, so large drifts keep full accuracy.
pub fn decoherence_factor(trip: &LevyTriplet, t: f64, x: f64) -> C64 {
    let psi = characteristic_exponent(trip, x);
    C64::from_polar((-t * psi.re).exp(), -reduced_product(t, psi.im))
}

/// `a b mod 2 pi`, in `[-pi, pi]`.
fn reduced_product(a: f64, b: f64) -> f64 {
    const TWO_PI_HI: f64 = std::f64::consts::TAU;
    const TWO_PI_LO: f64 = 2.449_293_598_294_706_4e-16;
    let hi = a * b;
    let lo = a.mul_add(b, -hi);
    let k = (hi / TWO_PI_HI).round();
    if k == 0.0 {
        return hi + lo;
    }
    (-k).mul_add(TWO_PI_HI, hi) + ((-k).mul_add(TWO_PI_LO, lo))
}

/// `<x_i|rho_t|x_j> = Phi(t, x_i - x_j) <x_i|rho_0|x_j>` with minimal-image
/// separations on the grid.
pub fn apply_decoherence(rho: &DensityMatrix, trip: &LevyTriplet, t: f64) -> Result<DensityMatrix> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let grid = rho.space().expect_grid()?;
    let n = grid.n;
    let mut out = rho.matrix().clone();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out[[i, j]] *= decoherence_factor(trip, t, grid.separation(i, j));
            }
        }
    }
    let op = Operator::from_matrix(*rho.space(), hermitian_part(&out));
    let min = op.min_eigenvalue()?;
    if min < -crate::operator::POSITIVITY_TOL {
        return Err(Error::NonPsdDecoherence(min));
    }
    DensityMatrix::new(op)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BochnerReport {
    pub pass: bool,
    pub min_eigenvalue: f64,
}

/// Smallest eigenvalue of `[Phi(t, x_i - x_j)]` over the given points;
/// passes when it is at least `-1e-10`.
pub fn bochner_check(trip: &LevyTriplet, t: f64, points: &[f64]) -> Result<BochnerReport> {
    let n = points.len();
    let m = Array2::from_shape_fn((n, n), |(i, j)| decoherence_factor(trip, t, points[i] - points[j]));
    let min = min_eigenvalue_of(&hermitian_part(&m))?;
    Ok(BochnerReport {
        pass: min >= -1e-10,
        min_eigenvalue: min,
    })
}

/// Rows `t, x, re, im, abs` of `Phi` on a rectangular sample.
pub fn phi_surface(trip: &LevyTriplet, times: &[f64], xs: &[f64]) -> Vec<[f64; 5]> {
    let mut rows = Vec::with_capacity(times.len() * xs.len());
    for &t in times {
        for &x in xs {
            let z = decoherence_factor(trip, t, x);
            rows.push([t, x, z.re, z.im, z.norm()]);
        }
    }
    rows
}
