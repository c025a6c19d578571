use std::f64::consts::PI;

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::operator::{dagger, hermitian_part, DensityMatrix, Operator};
use crate::space::{from_momentum_diagonal, Grid, HilbertSpace};
use crate::states::gaussian_packet;
use crate::C64;

use super::Region;

/// Physical meaning of an outcome axis; translations act on position axes
/// and boosts on momentum axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Grid cell index in `[0, n)`.
    Position,
    /// Signed momentum-lattice index in `[-n/2, n/2)`.
    Momentum,
    /// Plain outcome index.
    Index,
}

/// The operator generating a covariant phase-space POVM, placed at `x = 0`.
#[derive(Debug, Clone)]
pub struct SeedState {
    pub state: DensityMatrix,
    /// Packet width for the Gaussian case.
    pub sigma: Option<f64>,
}

impl SeedState {
    /// `|psi><psi|` with `<x|psi> ∝ exp(-x^2 / 4 sigma^2)`.
    pub fn gaussian(space: &HilbertSpace, sigma: f64) -> Result<Self> {
        let ket = gaussian_packet(space, 0.0, 0.0, sigma)?;
        Ok(SeedState {
            state: DensityMatrix::pure(space, &ket)?,
            sigma: Some(sigma),
        })
    }

    pub fn general(state: DensityMatrix) -> Self {
        SeedState { state, sigma: None }
    }

    /// `h(x) = <x|S|x>` indexed by offset from the origin cell, in DFT-bin
    /// order (offset `-1` is the last entry).
    pub fn position_density(&self) -> Result<Array1<f64>> {
        let grid = self.state.space().expect_grid()?;
        let c = origin_cell(&grid)?;
        let n = grid.n;
        Ok(Array1::from_shape_fn(n, |off| self.state.population((c + off) % n).max(0.0)))
    }

    /// `h(p) = <p|S|p>` indexed by momentum-lattice bin.
    pub fn momentum_density(&self) -> Result<Array1<f64>> {
        let grid = self.state.space().expect_grid()?;
        let f = grid.dft();
        let m = f.dot(self.state.matrix()).dot(&dagger(&f));
        // a density in exact arithmetic; rounding can leave entries near -1e-19
        Ok(Array1::from_shape_fn(grid.n, |k| m[[k, k]].re.max(0.0)))
    }

    fn kets(&self) -> Result<Vec<(f64, Array1<C64>)>> {
        let (e, v) = self.state.op().eigh()?;
        Ok(e.iter()
            .enumerate()
            .filter(|(_, &w)| w > 1e-14)
            .map(|(k, &w)| (w, v.column(k).to_owned()))
            .collect())
    }
}

fn origin_cell(grid: &Grid) -> Result<usize> {
    match grid.cells(-grid.x_min) {
        Some(c) if c >= 0 && (c as usize) < grid.n => Ok(c as usize),
        _ => Err(Error::param("grid", "the origin x = 0 must be a grid point")),
    }
}

#[derive(Debug, Clone)]
enum Kind {
    /// `F({k}) = diag_j h[(j - k) mod n]`
    Position { h: Array1<f64> },
    /// `F({m})` diagonal in momentum with `h[(f - m) mod n]` at frequency `f`.
    Momentum { h: Array1<f64> },
    /// `F({j0, m0}) = sum_r (lambda_r / n) |psi_r(j0, m0)><psi_r(j0, m0)|`
    Joint {
        seeds: Vec<(f64, Array1<C64>)>,
        origin: usize,
    },
    Projectors(Vec<Operator>),
    /// One axis of a joint POVM, summing over the other.
    Marginal { parent: Box<Povm>, axis: usize },
}

/// Finite-outcome POVM; effects of regions are sums of elementary effects.
#[derive(Debug, Clone)]
pub struct Povm {
    space: HilbertSpace,
    axes: Vec<Axis>,
    ranges: Vec<(i64, i64)>,
    kind: Kind,
    normalization_defect: f64,
}

fn grid_ranges(n: usize) -> ((i64, i64), (i64, i64)) {
    let n = n as i64;
    ((0, n), (-n / 2, n / 2))
}

fn check_weights(h: &[f64], n: usize) -> Result<Array1<f64>> {
    if h.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: h.len() });
    }
    if let Some(w) = h.iter().find(|w| !(**w >= 0.0)) {
        return Err(Error::InvalidDensity(format!("negative smearing weight {w}")));
    }
    let total: f64 = h.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidDensity(format!("smearing weights sum to {total}")));
    }
    Ok(Array1::from(h.to_vec()))
}

/// Normalized discrete Gaussian smearing weights `∝ exp(-s^2 / 2 sigma^2)`
/// over minimal-image offsets, in DFT-bin order.
pub fn gaussian_weights(grid: &Grid, sigma: f64) -> Array1<f64> {
    let w = Array1::from_shape_fn(grid.n, |k| {
        let s = grid.separation(k, 0);
        (-s * s / (2.0 * sigma * sigma)).exp()
    });
    let total = w.sum();
    w / total
}

/// Delta weights: the sharp position PVM.
pub fn delta_weights(n: usize) -> Array1<f64> {
    let mut w = Array1::zeros(n);
    w[0] = 1.0;
    w
}

/// `F^x(M) = (chi_M * h)(x_hat)` with cyclic convolution on the grid.
pub fn smeared_position_povm(space: &HilbertSpace, h: &[f64]) -> Result<Povm> {
    let grid = space.expect_grid()?;
    let h = check_weights(h, grid.n)?;
    Ok(Povm {
        space: *space,
        axes: vec![Axis::Position],
        ranges: vec![grid_ranges(grid.n).0],
        kind: Kind::Position { h },
        normalization_defect: 0.0,
    })
}

/// Momentum analogue of [`smeared_position_povm`]; `h` indexed by momentum
/// bin offset.
pub fn smeared_momentum_povm(space: &HilbertSpace, h: &[f64]) -> Result<Povm> {
    let grid = space.expect_grid()?;
    let h = check_weights(h, grid.n)?;
    Ok(Povm {
        space: *space,
        axes: vec![Axis::Momentum],
        ranges: vec![grid_ranges(grid.n).1],
        kind: Kind::Momentum { h },
        normalization_defect: 0.0,
    })
}

/// Covariant phase-space POVM generated by `seed`: elementary outcome
/// `(j0, m0)` is the seed Weyl-translated to position cell `j0` and
/// momentum `m0 dp`, with weight `dx dp / (2 pi hbar) = 1/n`. The frame
/// defect `||F(total) - 1||_max` is measured here and must not exceed
/// `tolerance`.
pub fn joint_xp_povm(space: &HilbertSpace, seed: &SeedState, tolerance: f64) -> Result<Povm> {
    let grid = space.expect_grid()?;
    if seed.state.space() != space {
        return Err(Error::SpaceMismatch("seed state lives on another space".into()));
    }
    let (rx, rp) = grid_ranges(grid.n);
    let mut povm = Povm {
        space: *space,
        axes: vec![Axis::Position, Axis::Momentum],
        ranges: vec![rx, rp],
        kind: Kind::Joint {
            seeds: seed.kets()?,
            origin: origin_cell(&grid)?,
        },
        normalization_defect: 0.0,
    };
    let total = povm.effect(&povm.total_region())?;
    let defect = (&total - &Operator::identity(space)).max_abs();
    if defect > tolerance {
        return Err(Error::FrameIncompleteness { defect, tolerance });
    }
    povm.normalization_defect = defect;
    Ok(povm)
}

/// PVM from mutually orthogonal projectors summing to the identity.
pub fn projective_povm(projectors: Vec<Operator>) -> Result<Povm> {
    let space = *validate_pvm(&projectors)?;
    Ok(Povm {
        space,
        axes: vec![Axis::Index],
        ranges: vec![(0, projectors.len() as i64)],
        kind: Kind::Projectors(projectors),
        normalization_defect: 0.0,
    })
}

pub(crate) fn validate_pvm(projectors: &[Operator]) -> Result<&HilbertSpace> {
    let first = projectors.first().ok_or_else(|| Error::InvalidPvm("no projectors".into()))?;
    let space = first.space();
    let mut sum = Operator::zeros(space);
    for (i, e) in projectors.iter().enumerate() {
        if e.space() != space {
            return Err(Error::InvalidPvm("projectors on different spaces".into()));
        }
        let herm = e.hermiticity_defect();
        let idem = (&e.dot(e) - e).max_abs();
        if herm > 1e-12 || idem > 1e-12 {
            return Err(Error::InvalidPvm(format!("element {i} is not an orthogonal projector")));
        }
        for (j, f) in projectors.iter().enumerate().skip(i + 1) {
            let overlap = e.dot(f).max_abs();
            if overlap > 1e-12 {
                return Err(Error::InvalidPvm(format!("elements {i} and {j} overlap ({overlap:.3e})")));
            }
        }
        sum = &sum + e;
    }
    let defect = (&sum - &Operator::identity(space)).max_abs();
    if defect > 1e-12 {
        return Err(Error::InvalidPvm(format!("projectors sum to identity only within {defect:.3e}")));
    }
    Ok(space)
}

impl Povm {
    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn ranges(&self) -> &[(i64, i64)] {
        &self.ranges
    }

    /// `||F(total) - 1||_max` measured at construction.
    pub fn normalization_defect(&self) -> f64 {
        self.normalization_defect
    }

    pub fn total_region(&self) -> Region {
        match self.ranges.as_slice() {
            [(lo, hi)] => Region::interval(*lo, *hi),
            [(a, b), (c, d)] => Region::rect(&Region::interval(*a, *b), &Region::interval(*c, *d)),
            _ => unreachable!("povms have one or two axes"),
        }
    }

    pub fn effect(&self, region: &Region) -> Result<Operator> {
        region.check_within(&self.ranges)?;
        match &self.kind {
            Kind::Position { h } => {
                let n = h.len();
                let diag = Array1::from_shape_fn(n, |j| {
                    region
                        .axis(0)
                        .iter()
                        .map(|&k| h[(j as i64 - k).rem_euclid(n as i64) as usize])
                        .sum::<f64>()
                });
                Ok(Operator::from_matrix(self.space, Array2::from_diag(&diag.mapv(|x| C64::new(x, 0.0)))))
            }
            Kind::Momentum { h } => {
                let grid = self.space.expect_grid()?;
                let n = h.len() as i64;
                let diag = Array1::from_shape_fn(grid.n, |b| {
                    let f = grid.frequency(b);
                    let w: f64 = region.axis(0).iter().map(|&m| h[(f - m).rem_euclid(n) as usize]).sum();
                    C64::new(w, 0.0)
                });
                Ok(Operator::from_matrix(self.space, from_momentum_diagonal(&grid, &diag)))
            }
            Kind::Joint { .. } => {
                let psi = self.packet_matrix(region)?;
                let m = psi.dot(&dagger(&psi));
                Ok(Operator::from_matrix(self.space, hermitian_part(&m)))
            }
            Kind::Projectors(ps) => {
                let mut out = Operator::zeros(&self.space);
                for &i in region.axis(0) {
                    out = &out + &ps[i as usize];
                }
                Ok(out)
            }
            Kind::Marginal { parent, axis } => {
                let total = parent.total_region();
                let r = if *axis == 0 {
                    Region::rect(region, &Region::cells(total.axis(1).iter().copied()))
                } else {
                    Region::rect(&Region::cells(total.axis(0).iter().copied()), region)
                };
                parent.effect(&r)
            }
        }
    }

    /// Packet `psi_r(j0, m0)` for a joint POVM, unweighted.
    pub fn packet(&self, j0: i64, m0: i64, r: usize) -> Result<Array1<C64>> {
        match &self.kind {
            Kind::Joint { seeds, origin } => Ok(weyl_translate(&seeds[r].1, *origin, j0, m0)),
            _ => Err(Error::param("povm", "packets exist only for joint phase-space POVMs")),
        }
    }

    /// Columns `sqrt(lambda_r / n) psi_r(j0, m0)` over the region's outcomes.
    fn packet_matrix(&self, region: &Region) -> Result<Array2<C64>> {
        let Kind::Joint { seeds, origin } = &self.kind else {
            return Err(Error::param("povm", "not a joint POVM"));
        };
        let d = self.space.dim();
        let labels = region.labels();
        let mut out = Array2::zeros((d, labels.len() * seeds.len()));
        let mut col = 0;
        for l in &labels {
            for (w, s) in seeds {
                let v = weyl_translate(s, *origin, l[0], l[1]);
                let scale = (w / d as f64).sqrt();
                for j in 0..d {
                    out[[j, col]] = v[j] * scale;
                }
                col += 1;
            }
        }
        Ok(out)
    }

    /// `Tr(rho F(M))` without forming the effect for joint POVMs.
    pub fn probability(&self, rho: &DensityMatrix, region: &Region) -> Result<f64> {
        if rho.space() != &self.space {
            return Err(Error::SpaceMismatch("state and POVM on different spaces".into()));
        }
        match &self.kind {
            Kind::Joint { .. } => {
                region.check_within(&self.ranges)?;
                let psi = self.packet_matrix(region)?;
                let rp = rho.matrix().dot(&psi);
                let mut acc = 0.0;
                for c in 0..psi.ncols() {
                    acc += psi.column(c).iter().zip(rp.column(c).iter()).map(|(a, b)| (a.conj() * b).re).sum::<f64>();
                }
                Ok(acc)
            }
            _ => Ok(rho.expect(&self.effect(region)?).re),
        }
    }

    /// Probabilities of all elementary outcomes of a joint POVM, indexed
    /// `[j0][m0 + n/2]`.
    pub fn atom_probabilities(&self, rho: &DensityMatrix) -> Result<Array2<f64>> {
        let n = self.space.dim();
        let half = n as i64 / 2;
        let mut out = Array2::zeros((n, n));
        for j0 in 0..n as i64 {
            for m0 in -half..half {
                let r = Region::rect(&Region::single(j0), &Region::single(m0));
                out[[j0 as usize, (m0 + half) as usize]] = self.probability(rho, &r)?;
            }
        }
        Ok(out)
    }

    /// Position and momentum marginals of a joint POVM.
    pub fn marginals(&self) -> Result<(Povm, Povm)> {
        if !matches!(self.kind, Kind::Joint { .. }) {
            return Err(Error::param("povm", "marginals require a joint POVM"));
        }
        let marginal = |axis: usize| Povm {
            space: self.space,
            axes: vec![self.axes[axis]],
            ranges: vec![self.ranges[axis]],
            kind: Kind::Marginal {
                parent: Box::new(self.clone()),
                axis,
            },
            normalization_defect: self.normalization_defect,
        };
        Ok((marginal(0), marginal(1)))
    }

    pub(crate) fn seeds(&self) -> Option<(&[(f64, Array1<C64>)], usize)> {
        match &self.kind {
            Kind::Joint { seeds, origin } => Some((seeds, *origin)),
            _ => None,
        }
    }
}

/// Seed translated from the origin cell to cell `j0` and boosted by the
/// lattice momentum `m0 dp`.
pub(crate) fn weyl_translate(seed: &Array1<C64>, origin: usize, j0: i64, m0: i64) -> Array1<C64> {
    let n = seed.len() as i64;
    let shift = j0 - origin as i64;
    Array1::from_shape_fn(n as usize, |j| {
        let src = (j as i64 - shift).rem_euclid(n) as usize;
        let phase = 2.0 * PI * ((m0 * (j as i64 - j0)).rem_euclid(n)) as f64 / n as f64;
        seed[src] * C64::from_polar(1.0, phase)
    })
}

/// Smallest and largest eigenvalue of an effect.
pub fn effect_bounds(effect: &Operator) -> Result<(f64, f64)> {
    let e = effect.eigvalsh()?;
    Ok((e[0], e[e.len() - 1]))
}

/// Mean and variance of a discrete density over minimal-image offsets
/// (DFT-bin order), in units of `spacing`.
pub fn offset_moments(h: &Array1<f64>, spacing: f64) -> (f64, f64) {
    let n = h.len() as i64;
    let off = |k: usize| {
        let k = k as i64;
        (if k < n / 2 { k } else { k - n }) as f64 * spacing
    };
    let total: f64 = h.sum();
    let mean: f64 = h.iter().enumerate().map(|(k, w)| w * off(k)).sum::<f64>() / total;
    let var: f64 = h.iter().enumerate().map(|(k, w)| w * (off(k) - mean).powi(2)).sum::<f64>() / total;
    (mean, var)
}
