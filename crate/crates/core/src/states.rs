//! Frequently used states: coherent states, Gaussian packets on the grid,
//! thermal and Gibbs states.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::operator::{norm_sqr, DensityMatrix, Operator};
use crate::space::HilbertSpace;
use crate::C64;

/// Truncated coherent state `|alpha>` with Fock amplitudes
/// `exp(-|alpha|^2/2) alpha^n / sqrt(n!)`, renormalized on the truncation.
/// Also returns the weight lost to truncation.
pub fn coherent_state(space: &HilbertSpace, alpha: C64) -> Result<(Array1<C64>, f64)> {
    let dim = space.expect_fock()?;
    let mut v = Array1::zeros(dim);
    let mut amp = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..dim {
        v[n] = amp;
        amp = amp * alpha / ((n + 1) as f64).sqrt();
    }
    let n2 = norm_sqr(&v);
    Ok((v.mapv(|z| z / n2.sqrt()), 1.0 - n2))
}

/// Gaussian packet `exp(-s^2 / 4 sigma^2 + i p0 s / hbar)` with `s` the
/// minimal-image separation from `x0`, normalized on the grid. For momenta
/// on the lattice the packet is exactly periodic.
pub fn gaussian_packet(space: &HilbertSpace, x0: f64, p0: f64, sigma: f64) -> Result<Array1<C64>> {
    let grid = space.expect_grid()?;
    if !(sigma > 0.0) {
        return Err(Error::param("sigma", "must be positive"));
    }
    let length = grid.length();
    let v = Array1::from_shape_fn(grid.n, |k| {
        let mut s = (grid.x(k) - x0).rem_euclid(length);
        if s > length / 2.0 {
            s -= length;
        }
        C64::from_polar((-s * s / (4.0 * sigma * sigma)).exp(), p0 * s / grid.hbar)
    });
    let n = norm_sqr(&v).sqrt();
    Ok(v.mapv(|z| z / n))
}

/// `exp(-beta H) / Z` for a Hermitian `H`.
pub fn gibbs_state(h: &Operator, beta: f64) -> Result<DensityMatrix> {
    let (e, v) = h.eigh()?;
    let e0 = e[0];
    let w: Vec<f64> = e.iter().map(|x| (-beta * (x - e0)).exp()).collect();
    let z: f64 = w.iter().sum();
    let d = h.dim();
    let scaled = Array2::from_shape_fn((d, d), |(i, j)| v[[i, j]] * (w[j] / z));
    let m = scaled.dot(&crate::operator::dagger(&v));
    DensityMatrix::new(Operator::from_matrix(*h.space(), crate::operator::hermitian_part(&m)))
}

/// Diagonal state with the given populations.
pub fn diagonal_state(space: &HilbertSpace, populations: &[f64]) -> Result<DensityMatrix> {
    if populations.len() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            got: populations.len(),
        });
    }
    let diag = Array1::from_iter(populations.iter().map(|&p| C64::new(p, 0.0)));
    DensityMatrix::new(Operator::from_matrix(*space, Array2::from_diag(&diag)))
}

/// Basis ket `|k>`.
pub fn basis(space: &HilbertSpace, k: usize) -> Array1<C64> {
    let mut v = Array1::zeros(space.dim());
    v[k] = C64::new(1.0, 0.0);
    v
}

/// Population in the top `count` Fock states.
pub fn leakage(rho: &DensityMatrix, count: usize) -> f64 {
    let d = rho.space().dim();
    (d.saturating_sub(count)..d).map(|k| rho.population(k)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::fock_ops;

    #[test]
    fn coherent_state_is_eigenvector_of_a() {
        let s = HilbertSpace::fock(40).unwrap();
        let alpha = C64::new(0.8, -0.6);
        let (v, lost) = coherent_state(&s, alpha).unwrap();
        assert!(lost.abs() < 1e-15);
        let av = fock_ops(&s).unwrap().a.apply(&v);
        let diff = (&av - &v.mapv(|z| z * alpha)).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        assert!(diff < 1e-12);
    }

    #[test]
    fn gibbs_populations_follow_boltzmann() {
        let s = HilbertSpace::fock(6).unwrap();
        let n = fock_ops(&s).unwrap().number;
        let w = gibbs_state(&n, 0.7).unwrap();
        for k in 1..6 {
            assert!((w.population(k) / w.population(k - 1) - (-0.7f64).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn packet_is_normalized_and_centred() {
        let s = HilbertSpace::centered_grid(64, 1.0).unwrap();
        let v = gaussian_packet(&s, 3.0, 0.5, 2.0).unwrap();
        assert!((norm_sqr(&v) - 1.0).abs() < 1e-14);
        let g = s.grid().unwrap();
        let mean: f64 = (0..64).map(|k| g.x(k) * v[k].norm_sqr()).sum();
        assert!((mean - 3.0).abs() < 1e-10);
    }
}
