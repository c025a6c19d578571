//! Finite-dimensional arenas: truncated Fock space, a qubit, and a periodic
//! one-dimensional position grid.

use std::f64::consts::PI;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceKind {
    Fock { dim: usize },
    Qubit,
    Grid1d { n_points: usize, dx: f64, x_min: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HilbertSpace {
    pub kind: SpaceKind,
    pub hbar: f64,
}

impl HilbertSpace {
    pub fn fock(dim: usize) -> Result<Self> {
        Self::new(SpaceKind::Fock { dim }, 1.0)
    }

    pub fn qubit() -> Self {
        HilbertSpace {
            kind: SpaceKind::Qubit,
            hbar: 1.0,
        }
    }

    pub fn grid1d(n_points: usize, dx: f64, x_min: f64) -> Result<Self> {
        Self::new(SpaceKind::Grid1d { n_points, dx, x_min }, 1.0)
    }

    /// Grid of `n_points` cells of width `dx` centred on the origin.
    pub fn centered_grid(n_points: usize, dx: f64) -> Result<Self> {
        Self::grid1d(n_points, dx, -(n_points as f64) * dx / 2.0)
    }

    pub fn new(kind: SpaceKind, hbar: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidSpace(format!("hbar must be positive, got {hbar}")));
        }
        match kind {
            SpaceKind::Fock { dim } if dim < 2 => {
                return Err(Error::InvalidSpace(format!("fock dim must be >= 2, got {dim}")))
            }
            SpaceKind::Grid1d { n_points, dx, x_min } => {
                if n_points < 4 || !n_points.is_power_of_two() {
                    return Err(Error::InvalidSpace(format!(
                        "grid n_points must be a power of two >= 4, got {n_points}"
                    )));
                }
                if !(dx > 0.0 && dx.is_finite()) || !x_min.is_finite() {
                    return Err(Error::InvalidSpace(format!("grid dx must be positive, got {dx}")));
                }
            }
            _ => {}
        }
        Ok(HilbertSpace { kind, hbar })
    }

    pub fn with_hbar(self, hbar: f64) -> Result<Self> {
        Self::new(self.kind, hbar)
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            SpaceKind::Fock { dim } => dim,
            SpaceKind::Qubit => 2,
            SpaceKind::Grid1d { n_points, .. } => n_points,
        }
    }

    pub fn is_fock(&self) -> bool {
        matches!(self.kind, SpaceKind::Fock { .. })
    }

    pub fn is_grid(&self) -> bool {
        matches!(self.kind, SpaceKind::Grid1d { .. })
    }

    pub(crate) fn expect_fock(&self) -> Result<usize> {
        match self.kind {
            SpaceKind::Fock { dim } => Ok(dim),
            _ => Err(Error::SpaceMismatch(format!("expected fock space, got {:?}", self.kind))),
        }
    }

    pub(crate) fn expect_qubit(&self) -> Result<()> {
        match self.kind {
            SpaceKind::Qubit => Ok(()),
            _ => Err(Error::SpaceMismatch(format!("expected qubit, got {:?}", self.kind))),
        }
    }

    pub(crate) fn expect_grid(&self) -> Result<Grid> {
        match self.kind {
            SpaceKind::Grid1d { n_points, dx, x_min } => Ok(Grid {
                n: n_points,
                dx,
                x_min,
                hbar: self.hbar,
            }),
            _ => Err(Error::SpaceMismatch(format!("expected grid1d, got {:?}", self.kind))),
        }
    }

    /// Geometry of a grid space.
    pub fn grid(&self) -> Result<Grid> {
        self.expect_grid()
    }
}

/// Geometry of a periodic position grid and its Fourier-dual momentum lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub n: usize,
    pub dx: f64,
    pub x_min: f64,
    pub hbar: f64,
}

impl Grid {
    pub fn length(&self) -> f64 {
        self.n as f64 * self.dx
    }

    /// Momentum lattice spacing `2 pi hbar / (n dx)`.
    pub fn dp(&self) -> f64 {
        2.0 * PI * self.hbar / self.length()
    }

    pub fn x(&self, k: usize) -> f64 {
        self.x_min + k as f64 * self.dx
    }

    pub fn positions(&self) -> Array1<f64> {
        Array1::from_shape_fn(self.n, |k| self.x(k))
    }

    /// Signed integer frequency of DFT bin `k`, negative frequencies wrapped
    /// into the upper half (the Nyquist bin is negative).
    pub fn frequency(&self, k: usize) -> i64 {
        let n = self.n as i64;
        let k = k as i64;
        if k < n / 2 {
            k
        } else {
            k - n
        }
    }

    /// DFT bin of a signed frequency, if it lies on the lattice.
    pub fn bin(&self, m: i64) -> Option<usize> {
        let half = self.n as i64 / 2;
        if m >= -half && m < half {
            Some(m.rem_euclid(self.n as i64) as usize)
        } else {
            None
        }
    }

    pub fn p(&self, k: usize) -> f64 {
        self.frequency(k) as f64 * self.dp()
    }

    pub fn momenta(&self) -> Array1<f64> {
        Array1::from_shape_fn(self.n, |k| self.p(k))
    }

    /// Minimal-image separation of cells `i` and `j` in units of length.
    pub fn separation(&self, i: usize, j: usize) -> f64 {
        let n = self.n as i64;
        let mut d = (i as i64 - j as i64).rem_euclid(n);
        if d > n / 2 {
            d -= n;
        }
        d as f64 * self.dx
    }

    /// Unitary DFT, `F[k, j] = exp(-2 pi i k j / n) / sqrt(n)`, mapping
    /// position amplitudes to momentum amplitudes.
    pub fn dft(&self) -> Array2<C64> {
        let n = self.n;
        let norm = 1.0 / (n as f64).sqrt();
        Array2::from_shape_fn((n, n), |(k, j)| {
            let phase = -2.0 * PI * ((k * j) % n) as f64 / n as f64;
            C64::from_polar(norm, phase)
        })
    }

    /// Whether `a` is an integer number of cells; returns that integer.
    pub fn cells(&self, a: f64) -> Option<i64> {
        lattice_index(a, self.dx)
    }

    /// Whether `q` lies on the momentum lattice; returns the integer index.
    pub fn momentum_cells(&self, q: f64) -> Option<i64> {
        lattice_index(q, self.dp())
    }
}

fn lattice_index(value: f64, spacing: f64) -> Option<i64> {
    let r = value / spacing;
    let k = r.round();
    if (r - k).abs() <= 1e-9 * r.abs().max(1.0) {
        Some(k as i64)
    } else {
        None
    }
}

/// Ladder operators on a truncated Fock space.
pub struct FockOps {
    pub a: Operator,
    pub a_dagger: Operator,
    pub number: Operator,
}

/// `a|n> = sqrt(n)|n-1>` on the truncated basis, its adjoint, and `N = a^dag a`.
pub fn fock_ops(space: &HilbertSpace) -> Result<FockOps> {
    let dim = space.expect_fock()?;
    let mut a = Array2::zeros((dim, dim));
    for n in 1..dim {
        a[[n - 1, n]] = C64::new((n as f64).sqrt(), 0.0);
    }
    let number = Array2::from_shape_fn((dim, dim), |(i, j)| {
        if i == j {
            C64::new(i as f64, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let a = Operator::from_matrix(*space, a);
    Ok(FockOps {
        a_dagger: a.dag(),
        a,
        number: Operator::from_matrix(*space, number),
    })
}

/// Shift isometry `W = sum_n |n+1><n|` raised to the power `m` on the
/// truncated basis (the top `m` states are mapped to zero).
pub fn shift_isometry(space: &HilbertSpace, m: usize) -> Result<Operator> {
    let dim = space.expect_fock()?;
    let mut w = Array2::zeros((dim, dim));
    for n in 0..dim.saturating_sub(m) {
        w[[n + m, n]] = C64::new(1.0, 0.0);
    }
    Ok(Operator::from_matrix(*space, w))
}

pub struct PauliOps {
    pub sigma_x: Operator,
    pub sigma_y: Operator,
    pub sigma_z: Operator,
    pub sigma_plus: Operator,
    pub sigma_minus: Operator,
}

/// Pauli matrices in the basis `{|0> ground, |1> excited}`, with the excited
/// state as the `+1` eigenvector of `sigma_z`. Then `sigma_+ = |1><0|` and
/// `sigma_- = |0><1|`, and `[sigma_x, sigma_y] = 2i sigma_z` holds.
pub fn pauli_ops(space: &HilbertSpace) -> Result<PauliOps> {
    space.expect_qubit()?;
    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let m = |e: [C64; 4]| Operator::from_matrix(*space, Array2::from_shape_vec((2, 2), e.to_vec()).unwrap());
    Ok(PauliOps {
        sigma_x: m([o, l, l, o]),
        sigma_y: m([o, i, -i, o]),
        sigma_z: m([-l, o, o, l]),
        sigma_plus: m([o, o, l, o]),
        sigma_minus: m([o, l, o, o]),
    })
}

pub struct GridOps {
    pub x_hat: Operator,
    pub p_hat: Operator,
}

/// Position operator diagonal in the grid basis and momentum operator
/// `F^dag diag(p_k) F` on the periodic Fourier lattice.
pub fn grid_ops(space: &HilbertSpace) -> Result<GridOps> {
    let grid = space.expect_grid()?;
    let x = Array2::from_diag(&grid.positions().mapv(|x| C64::new(x, 0.0)));
    let p = momentum_function(space, |p| C64::new(p, 0.0))?;
    Ok(GridOps {
        x_hat: Operator::from_matrix(*space, x),
        p_hat: p,
    })
}

/// `f(p_hat)` for an arbitrary function on the momentum lattice.
pub fn momentum_function(space: &HilbertSpace, f: impl Fn(f64) -> C64) -> Result<Operator> {
    let grid = space.expect_grid()?;
    let diag = Array1::from_shape_fn(grid.n, |k| f(grid.p(k)));
    Ok(Operator::from_matrix(*space, from_momentum_diagonal(&grid, &diag)))
}

/// `g(x_hat)` for an arbitrary function on the grid points.
pub fn position_function(space: &HilbertSpace, f: impl Fn(f64) -> C64) -> Result<Operator> {
    let grid = space.expect_grid()?;
    let diag = grid.positions().mapv(f);
    Ok(Operator::from_matrix(*space, Array2::from_diag(&diag)))
}

pub(crate) fn from_momentum_diagonal(grid: &Grid, diag: &Array1<C64>) -> Array2<C64> {
    let f = grid.dft();
    let fd = f.t().mapv(|z| z.conj());
    let scaled = Array2::from_shape_fn((grid.n, grid.n), |(k, j)| diag[k] * f[[k, j]]);
    let out = fd.dot(&scaled);
    // exact Hermitian symmetry when diag is real
    if diag.iter().all(|z| z.im == 0.0) {
        let h = (&out + &out.t().mapv(|z| z.conj())).mapv(|z| z * 0.5);
        return h;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fock_smallest_ladder() {
        let s = HilbertSpace::fock(2).unwrap();
        let ops = fock_ops(&s).unwrap();
        assert_eq!(ops.a.matrix()[[0, 1]], C64::new(1.0, 0.0));
        assert_eq!(ops.a.matrix()[[1, 0]], C64::new(0.0, 0.0));
        assert_eq!(ops.a.matrix()[[0, 0]], C64::new(0.0, 0.0));
    }

    #[test]
    fn fock_sqrt_amplitude() {
        let s = HilbertSpace::fock(4).unwrap();
        let ops = fock_ops(&s).unwrap();
        assert!((ops.a.matrix()[[2, 3]].re - 1.7320508).abs() < 1e-7);
    }

    #[test]
    fn fock_number_spectrum() {
        let s = HilbertSpace::fock(10).unwrap();
        let ops = fock_ops(&s).unwrap();
        let ev = ops.number.eigvalsh().unwrap();
        for (k, e) in ev.iter().enumerate() {
            assert!((e - k as f64).abs() < 1e-12);
        }
        let ada = ops.a_dagger.dot(&ops.a);
        assert!((&ada - &ops.number).max_abs() < 1e-14);
    }

    #[test]
    fn fock_commutator_below_edge() {
        let dim = 12;
        let s = HilbertSpace::fock(dim).unwrap();
        let ops = fock_ops(&s).unwrap();
        let c = ops.a.commutator(&ops.a_dagger);
        for i in 0..dim - 1 {
            for j in 0..dim - 1 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((c.matrix()[[i, j]] - C64::new(expected, 0.0)).norm() < 1e-12);
            }
        }
        assert!((c.matrix()[[dim - 1, dim - 1]].re + (dim as f64 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn wrong_space_kind() {
        let q = HilbertSpace::qubit();
        assert!(matches!(fock_ops(&q), Err(Error::SpaceMismatch(_))));
        assert!(matches!(grid_ops(&q), Err(Error::SpaceMismatch(_))));
        let f = HilbertSpace::fock(3).unwrap();
        assert!(matches!(pauli_ops(&f), Err(Error::SpaceMismatch(_))));
    }

    #[test]
    fn invalid_spaces() {
        assert!(HilbertSpace::fock(1).is_err());
        assert!(HilbertSpace::grid1d(6, 1.0, 0.0).is_err());
        assert!(HilbertSpace::grid1d(2, 1.0, 0.0).is_err());
        assert!(HilbertSpace::grid1d(8, 0.0, 0.0).is_err());
        assert!(HilbertSpace::new(SpaceKind::Qubit, -1.0).is_err());
    }

    #[test]
    fn pauli_algebra() {
        let q = HilbertSpace::qubit();
        let p = pauli_ops(&q).unwrap();
        let pm = p.sigma_plus.dot(&p.sigma_minus);
        let mut excited = Array2::zeros((2, 2));
        excited[[1, 1]] = C64::new(1.0, 0.0);
        assert_eq!(pm.matrix(), &excited);

        let c = p.sigma_x.commutator(&p.sigma_y);
        let two_i_z = p.sigma_z.scale(C64::new(0.0, 2.0));
        assert!((&c - &two_i_z).max_abs() < 1e-15);

        let one = ndarray::arr1(&[C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
        let lowered = p.sigma_minus.matrix().dot(&one);
        assert_eq!(lowered[0], C64::new(1.0, 0.0));
        assert_eq!(lowered[1], C64::new(0.0, 0.0));

        let plus = (&p.sigma_x + &p.sigma_y.scale(C64::new(0.0, 1.0))).scale(C64::new(0.5, 0.0));
        assert!((&plus - &p.sigma_plus).max_abs() < 1e-15);
    }

    #[test]
    fn grid_positions_and_momentum() {
        let s = HilbertSpace::grid1d(4, 1.0, 0.0).unwrap();
        let g = grid_ops(&s).unwrap();
        let d: Vec<f64> = g.x_hat.matrix().diag().iter().map(|z| z.re).collect();
        assert_eq!(d, vec![0.0, 1.0, 2.0, 3.0]);

        let s = HilbertSpace::grid1d(16, 0.5, -4.0).unwrap();
        let g = grid_ops(&s).unwrap();
        let ones = Array1::from_elem(16, C64::new(1.0, 0.0));
        let out = g.p_hat.matrix().dot(&ones);
        assert!(out.iter().all(|z| z.norm() < 1e-12));
        assert!(g.x_hat.hermiticity_defect() == 0.0);
        assert!(g.p_hat.hermiticity_defect() <= 1e-12);
    }

    #[test]
    fn momentum_translation_is_cyclic_shift() {
        let s = HilbertSpace::grid1d(8, 0.7, 0.0).unwrap();
        let g = grid_ops(&s).unwrap();
        let grid = s.grid().unwrap();
        let factor = C64::new(0.0, grid.dx / s.hbar);
        let u = crate::expm::expm(&g.p_hat.matrix().mapv(|z| z * factor)).unwrap();
        for j in 0..8 {
            let mut e = Array1::zeros(8);
            e[j] = C64::new(1.0, 0.0);
            let moved = u.dot(&e);
            let target = (j + 7) % 8;
            for (k, z) in moved.iter().enumerate() {
                let expected = if k == target { 1.0 } else { 0.0 };
                assert!((z - C64::new(expected, 0.0)).norm() < 1e-10, "j={j} k={k} z={z}");
            }
        }
    }

    #[test]
    fn separations_are_minimal_image() {
        let grid = HilbertSpace::grid1d(8, 1.0, 0.0).unwrap().grid().unwrap();
        assert_eq!(grid.separation(7, 0), -1.0);
        assert_eq!(grid.separation(0, 7), 1.0);
        assert_eq!(grid.separation(4, 0), 4.0);
        assert_eq!(grid.bin(-4), Some(4));
        assert_eq!(grid.bin(4), None);
        assert_eq!(grid.frequency(4), -4);
    }

    #[test]
    fn shift_isometry_projector() {
        let s = HilbertSpace::fock(6).unwrap();
        let w = shift_isometry(&s, 1).unwrap();
        let p1 = w.dot(&w.dag());
        let mut expected = Operator::identity(&s);
        expected.matrix_mut()[[0, 0]] = C64::new(0.0, 0.0);
        assert!((&p1 - &expected).max_abs() == 0.0);
    }
}
