//! Unitary group representations and covariance checks for maps, POVMs and
//! the Weyl relations.

use std::f64::consts::PI;

use ndarray::{Array1, Array2};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measurement::{Axis, Povm, Region};
use crate::operator::{DensityMatrix, Operator};
use crate::space::{from_momentum_diagonal, shift_isometry, HilbertSpace};
use crate::states::gaussian_packet;
use crate::superop::LinearMap;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Group {
    /// `U(theta) = exp(i theta N)` on a Fock space.
    U1Phase,
    /// `U(phi) = exp((i/hbar) phi S_z)`, `S_z = hbar sigma_z / 2`, on a qubit.
    So2Spin,
    /// `U(a) = exp((i/hbar) a p_hat)` on a grid; `U(a)|x> = |x - a>`.
    Translation1d,
    /// `U(q) = exp((i/hbar) q x_hat)` on a grid.
    Boost1d,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitaryRep {
    pub group: Group,
    space: HilbertSpace,
}

impl UnitaryRep {
    pub fn new(group: Group, space: &HilbertSpace) -> Result<Self> {
        match group {
            Group::U1Phase => {
                space.expect_fock()?;
            }
            Group::So2Spin => space.expect_qubit()?,
            Group::Translation1d | Group::Boost1d => {
                space.expect_grid()?;
            }
        }
        Ok(UnitaryRep { group, space: *space })
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    /// Whether `g` is an exact symmetry of the discretization.
    pub fn on_lattice(&self, g: f64) -> bool {
        match self.group {
            Group::U1Phase | Group::So2Spin => true,
            Group::Translation1d => self.space.grid().map(|gr| gr.cells(g).is_some()).unwrap_or(false),
            Group::Boost1d => self.space.grid().map(|gr| gr.momentum_cells(g).is_some()).unwrap_or(false),
        }
    }

    pub fn operator(&self, g: f64) -> Operator {
        let s = self.space;
        let d = s.dim();
        match self.group {
            Group::U1Phase => diagonal(&s, Array1::from_shape_fn(d, |n| C64::from_polar(1.0, g * n as f64))),
            Group::So2Spin => diagonal(&s, Array1::from(vec![C64::from_polar(1.0, -g / 2.0), C64::from_polar(1.0, g / 2.0)])),
            Group::Translation1d => {
                let grid = s.grid().expect("checked at construction");
                if let Some(m) = grid.cells(g) {
                    let n = grid.n as i64;
                    let mut u = Array2::zeros((d, d));
                    for j in 0..n {
                        u[[(j - m).rem_euclid(n) as usize, j as usize]] = C64::new(1.0, 0.0);
                    }
                    Operator::from_matrix(s, u)
                } else {
                    let diag = Array1::from_shape_fn(d, |k| C64::from_polar(1.0, g * grid.p(k) / grid.hbar));
                    Operator::from_matrix(s, from_momentum_diagonal(&grid, &diag))
                }
            }
            Group::Boost1d => {
                let grid = s.grid().expect("checked at construction");
                diagonal(&s, Array1::from_shape_fn(d, |k| C64::from_polar(1.0, g * grid.x(k) / grid.hbar)))
            }
        }
    }
}

fn diagonal(space: &HilbertSpace, d: Array1<C64>) -> Operator {
    Operator::from_matrix(*space, Array2::from_diag(&d))
}

/// `max_{g, rho} || M[U rho U^dag] - U M[rho] U^dag ||_1`.
pub fn covariance_residual<M: LinearMap + ?Sized>(
    map: &M,
    rep: &UnitaryRep,
    params: &[f64],
    samples: &[DensityMatrix],
) -> Result<f64> {
    if map.space() != rep.space() {
        return Err(Error::SpaceMismatch("map and representation on different spaces".into()));
    }
    let mut worst: f64 = 0.0;
    for &g in params {
        if !rep.on_lattice(g) {
            log::warn!("covariance check at off-lattice parameter {g}");
        }
        let u = rep.operator(g);
        let ud = u.dag();
        for rho in samples {
            let moved = u.dot(rho.op()).dot(&ud);
            let lhs = map.apply_to(&moved);
            let rhs = u.dot(&map.apply_to(rho.op())).dot(&ud);
            worst = worst.max((&lhs - &rhs).trace_norm()?);
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeylResidual {
    pub residual: f64,
    pub on_lattice: bool,
}

/// `|| U(a) U(q) - exp(i q a / hbar) U(q) U(a) ||_max`. Off-lattice shifts are
/// evaluated anyway and flagged.
pub fn weyl_residual(space: &HilbertSpace, a: f64, q: f64) -> Result<WeylResidual> {
    let grid = space.expect_grid()?;
    let ta = UnitaryRep::new(Group::Translation1d, space)?;
    let bq = UnitaryRep::new(Group::Boost1d, space)?;
    let on_lattice = ta.on_lattice(a) && bq.on_lattice(q);
    if !on_lattice {
        log::warn!("off-lattice shift: a = {a}, q = {q}");
    }
    let ua = ta.operator(a);
    let uq = bq.operator(q);
    let phase = C64::from_polar(1.0, q * a / grid.hbar);
    let lhs = ua.dot(&uq);
    let rhs = uq.dot(&ua).scale(phase);
    Ok(WeylResidual {
        residual: (&lhs - &rhs).max_abs(),
        on_lattice,
    })
}

/// `U(theta) W^m - exp(i theta m) W^m U(theta)` on the lowest `dim - m`
/// basis states, max-entry norm.
pub fn generalized_weyl_residual(space: &HilbertSpace, theta: f64, m: usize) -> Result<f64> {
    let dim = space.expect_fock()?;
    if 2 * m >= dim {
        return Err(Error::TruncationTooSmall(format!("power {m} needs dim > {}", 2 * m)));
    }
    let u = UnitaryRep::new(Group::U1Phase, space)?.operator(theta);
    let w = shift_isometry(space, m)?;
    let lhs = u.dot(&w);
    let rhs = w.dot(&u).scale(C64::from_polar(1.0, theta * m as f64));
    let diff = &lhs - &rhs;
    let mut worst: f64 = 0.0;
    for i in 0..dim {
        for j in 0..dim - m {
            worst = worst.max(diff.matrix()[[i, j]].norm());
        }
    }
    Ok(worst)
}

/// Transformation law of a POVM under translations and boosts:
/// `U(a) F(M) U(a)^dag = F(M - a)` on position axes and
/// `U(q) F(M × N) U(q)^dag = F(M × (N + q))` on momentum axes, where a
/// position-only POVM is boost invariant. Returns the max-entry residual.
pub fn povm_covariance_residual(povm: &Povm, rep: &UnitaryRep, g: f64, region: &Region) -> Result<f64> {
    if povm.space() != rep.space() {
        return Err(Error::SpaceMismatch("povm and representation on different spaces".into()));
    }
    let grid = rep.space().expect_grid()?;
    let mut shifts = vec![0i64; povm.axes().len()];
    for (axis, shift) in povm.axes().iter().zip(shifts.iter_mut()) {
        match (rep.group, axis) {
            (Group::Translation1d, Axis::Position) => {
                *shift = -grid.cells(g).ok_or_else(|| Error::param("a", "translation must be an integer number of cells"))?;
            }
            (Group::Boost1d, Axis::Momentum) => {
                *shift = grid
                    .momentum_cells(g)
                    .ok_or_else(|| Error::OffLatticeMomentumTransfer(g))?;
            }
            (Group::Translation1d | Group::Boost1d, _) => {}
            _ => return Err(Error::param("group", "only translations and boosts act on outcome spaces")),
        }
    }
    let target = region.shifted(&shifts, povm.ranges())?;
    let u = rep.operator(g);
    let lhs = u.dot(&povm.effect(region)?).dot(&u.dag());
    Ok((&lhs - &povm.effect(&target)?).max_abs())
}

/// Row of a residual report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub relation: String,
    pub params: Vec<f64>,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ResidualReport {
    pub fn new(relation: impl Into<String>, params: Vec<f64>, residual: f64, tolerance: f64) -> Self {
        ResidualReport {
            relation: relation.into(),
            params,
            residual,
            tolerance,
            pass: residual <= tolerance,
        }
    }
}

/// Random states whose support stays away from the periodic seam: mixtures
/// of superpositions of Gaussian packets of width `sigma` centred within
/// `spread` of the origin with momenta below `p_max`. On such states the
/// grid position operator behaves like the continuum one under small
/// translations.
pub fn localized_samples<R: Rng + ?Sized>(
    space: &HilbertSpace,
    count: usize,
    sigma: f64,
    spread: f64,
    p_max: f64,
    rng: &mut R,
) -> Result<Vec<DensityMatrix>> {
    let d = space.dim();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut m = Array2::<C64>::zeros((d, d));
        let n_mix = rng.random_range(1..=3);
        let mut total_w = 0.0;
        for _ in 0..n_mix {
            let mut ket = Array1::<C64>::zeros(d);
            for _ in 0..rng.random_range(1..=3) {
                let x0 = rng.random_range(-spread..=spread);
                let p0 = rng.random_range(-p_max..=p_max);
                let c = C64::from_polar(rng.random_range(0.2..1.0), rng.random_range(0.0..2.0 * PI));
                ket = ket + gaussian_packet(space, x0, p0, sigma)?.mapv(|z| z * c);
            }
            let n2: f64 = ket.iter().map(|z| z.norm_sqr()).sum();
            let w: f64 = rng.random_range(0.1..1.0);
            total_w += w;
            for a in 0..d {
                for b in 0..d {
                    m[[a, b]] += ket[a] * ket[b].conj() * (w / n2);
                }
            }
        }
        m.mapv_inplace(|z| z / total_w);
        let m = crate::operator::hermitian_part(&m);
        out.push(DensityMatrix::new(Operator::from_matrix(*space, m))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::{gaussian_weights, joint_xp_povm, smeared_position_povm, SeedState};
    use crate::superop::Superoperator;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_element_gives_zero() {
        let s = HilbertSpace::fock(5).unwrap();
        let rep = UnitaryRep::new(Group::U1Phase, &s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let map = Superoperator::new(s, crate::operator::random_ginibre(25, 25, &mut rng)).unwrap();
        let samples: Vec<_> = (0..3).map(|_| DensityMatrix::random(&s, &mut rng)).collect();
        assert_eq!(covariance_residual(&map, &rep, &[0.0], &samples).unwrap(), 0.0);
    }

    #[test]
    fn representation_properties() {
        let g = HilbertSpace::centered_grid(16, 0.5).unwrap();
        let grid = g.grid().unwrap();
        let t = UnitaryRep::new(Group::Translation1d, &g).unwrap();
        let b = UnitaryRep::new(Group::Boost1d, &g).unwrap();
        let (a1, a2) = (2.0 * grid.dx, 3.0 * grid.dx);
        assert!((&t.operator(a1).dot(&t.operator(a2)) - &t.operator(a1 + a2)).max_abs() < 1e-10);
        let (q1, q2) = (grid.dp(), -3.0 * grid.dp());
        assert!((&b.operator(q1).dot(&b.operator(q2)) - &b.operator(q1 + q2)).max_abs() < 1e-10);
        // the Fourier route agrees with the permutation for lattice shifts
        let fourier = {
            let diag = Array1::from_shape_fn(16, |k| C64::from_polar(1.0, a1 * grid.p(k) / grid.hbar));
            Operator::from_matrix(g, from_momentum_diagonal(&grid, &diag))
        };
        assert!((&fourier - &t.operator(a1)).max_abs() < 1e-12);

        let f = HilbertSpace::fock(6).unwrap();
        let u = UnitaryRep::new(Group::U1Phase, &f).unwrap();
        let uu = u.operator(1.0).dot(&u.operator(2.0 * PI - 1.0));
        assert!((&uu - &Operator::identity(&f)).max_abs() < 1e-12);
        let q = UnitaryRep::new(Group::So2Spin, &HilbertSpace::qubit()).unwrap();
        let w = q.operator(0.4);
        assert!((&w.dag().dot(&w) - &Operator::identity(&HilbertSpace::qubit())).max_abs() < 1e-15);
    }

    #[test]
    fn weyl_relation() {
        let s = HilbertSpace::grid1d(32, 1.0, 0.0).unwrap();
        let dp = s.grid().unwrap().dp();
        assert_eq!(weyl_residual(&s, 0.0, dp).unwrap().residual, 0.0);
        let on = weyl_residual(&s, 2.0, 3.0 * dp).unwrap();
        assert!(on.on_lattice && on.residual <= 1e-10);
        let off = weyl_residual(&s, 0.5, 3.0 * dp).unwrap();
        assert!(!off.on_lattice && off.residual > 1e-3);
    }

    #[test]
    fn generalized_weyl() {
        let s = HilbertSpace::fock(20).unwrap();
        assert_eq!(generalized_weyl_residual(&s, 0.7, 0).unwrap(), 0.0);
        assert!(generalized_weyl_residual(&s, 0.7, 1).unwrap() <= 1e-10);
        assert!(generalized_weyl_residual(&s, 0.7, 10).is_err());
        let w = shift_isometry(&s, 1).unwrap();
        let p1 = w.dot(&w.dag());
        let mut expected = Operator::identity(&s);
        expected.matrix_mut()[[0, 0]] = C64::new(0.0, 0.0);
        assert_eq!(p1, expected);
    }

    #[test]
    fn position_povm_translation_and_boost() {
        let s = HilbertSpace::centered_grid(64, 1.0).unwrap();
        let grid = s.grid().unwrap();
        let povm = smeared_position_povm(&s, gaussian_weights(&grid, 2.0).as_slice().unwrap()).unwrap();
        let t = UnitaryRep::new(Group::Translation1d, &s).unwrap();
        let b = UnitaryRep::new(Group::Boost1d, &s).unwrap();
        let r = Region::interval(58, 64).with_periodic(true);
        assert_eq!(povm_covariance_residual(&povm, &t, 0.0, &r).unwrap(), 0.0);
        assert!(povm_covariance_residual(&povm, &t, 4.0, &r).unwrap() <= 1e-10);
        assert!(povm_covariance_residual(&povm, &b, 3.0 * grid.dp(), &r).unwrap() <= 1e-10);
        let closed = Region::interval(0, 3);
        assert!(matches!(povm_covariance_residual(&povm, &t, 4.0, &closed), Err(Error::RegionOverflow(_))));
    }

    #[test]
    fn joint_povm_translation_and_boost() {
        let s = HilbertSpace::centered_grid(32, 1.0).unwrap();
        let grid = s.grid().unwrap();
        let povm = joint_xp_povm(&s, &SeedState::gaussian(&s, 2.0).unwrap(), 1e-6).unwrap();
        let t = UnitaryRep::new(Group::Translation1d, &s).unwrap();
        let b = UnitaryRep::new(Group::Boost1d, &s).unwrap();
        let r = Region::rect(&Region::interval(10, 14), &Region::interval(-3, 1)).with_periodic(true);
        assert!(povm_covariance_residual(&povm, &t, 3.0, &r).unwrap() <= 1e-10);
        assert!(povm_covariance_residual(&povm, &b, 2.0 * grid.dp(), &r).unwrap() <= 1e-10);
    }
}
