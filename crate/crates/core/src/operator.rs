//! Dense operators on a [`HilbertSpace`] and density matrices.

use std::ops::{Add, Mul, Neg, Sub};

use ndarray::{Array1, Array2, ShapeBuilder};
use ndarray_linalg::{Eigh, SVD, UPLO};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::space::HilbertSpace;
use crate::C64;

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    space: HilbertSpace,
    matrix: Array2<C64>,
}

impl Operator {
    pub fn new(space: HilbertSpace, matrix: Array2<C64>) -> Result<Self> {
        let d = space.dim();
        if matrix.dim() != (d, d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Operator { space, matrix })
    }

    /// Panics if the matrix shape does not match the space.
    pub fn from_matrix(space: HilbertSpace, matrix: Array2<C64>) -> Self {
        Self::new(space, matrix).expect("operator shape must match its space")
    }

    pub fn identity(space: &HilbertSpace) -> Self {
        Operator {
            space: *space,
            matrix: Array2::eye(space.dim()),
        }
    }

    pub fn zeros(space: &HilbertSpace) -> Self {
        let d = space.dim();
        Operator {
            space: *space,
            matrix: Array2::zeros((d, d)),
        }
    }

    /// `|ket><bra|`
    pub fn outer(space: &HilbertSpace, ket: &Array1<C64>, bra: &Array1<C64>) -> Self {
        let d = space.dim();
        let m = Array2::from_shape_fn((d, d), |(i, j)| ket[i] * bra[j].conj());
        Operator::from_matrix(*space, m)
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn matrix_mut(&mut self) -> &mut Array2<C64> {
        &mut self.matrix
    }

    pub fn into_matrix(self) -> Array2<C64> {
        self.matrix
    }

    pub fn dag(&self) -> Self {
        Operator {
            space: self.space,
            matrix: dagger(&self.matrix),
        }
    }

    pub fn dot(&self, other: &Operator) -> Operator {
        self.check_space(other);
        Operator {
            space: self.space,
            matrix: self.matrix.dot(&other.matrix),
        }
    }

    pub fn apply(&self, ket: &Array1<C64>) -> Array1<C64> {
        self.matrix.dot(ket)
    }

    /// `[self, other]`
    pub fn commutator(&self, other: &Operator) -> Operator {
        &self.dot(other) - &other.dot(self)
    }

    /// `{self, other}`
    pub fn anticommutator(&self, other: &Operator) -> Operator {
        &self.dot(other) + &other.dot(self)
    }

    pub fn scale(&self, factor: C64) -> Operator {
        Operator {
            space: self.space,
            matrix: self.matrix.mapv(|z| z * factor),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Operator {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn trace(&self) -> C64 {
        self.matrix.diag().sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        max_abs(&self.matrix)
    }

    /// `max |A - A^dag|` entrywise.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.matrix[[i, j]] - self.matrix[[j, i]].conj()).norm());
            }
        }
        worst
    }

    pub fn hermitian_part(&self) -> Operator {
        Operator {
            space: self.space,
            matrix: hermitian_part(&self.matrix),
        }
    }

    /// Ascending eigenvalues of the Hermitian part.
    pub fn eigvalsh(&self) -> Result<Array1<f64>> {
        Ok(eigh_hermitian(&self.matrix)?.0)
    }

    /// Eigen decomposition of the Hermitian part: ascending eigenvalues and
    /// eigenvectors as columns.
    pub fn eigh(&self) -> Result<(Array1<f64>, Array2<C64>)> {
        eigh_hermitian(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigvalsh()?[0])
    }

    /// Schatten 1-norm (sum of singular values).
    pub fn trace_norm(&self) -> Result<f64> {
        trace_norm(&self.matrix)
    }

    /// `<bra|A|ket>`
    pub fn sandwich(&self, bra: &Array1<C64>, ket: &Array1<C64>) -> C64 {
        let ak = self.matrix.dot(ket);
        bra.iter().zip(ak.iter()).map(|(b, a)| b.conj() * a).sum()
    }

    /// `exp(factor * A)` for Hermitian `A` via its eigenbasis.
    pub fn exp_hermitian(&self, factor: C64) -> Result<Operator> {
        let (e, v) = self.eigh()?;
        let d = self.dim();
        let scaled = Array2::from_shape_fn((d, d), |(i, j)| v[[i, j]] * (factor * e[j]).exp());
        Ok(Operator {
            space: self.space,
            matrix: scaled.dot(&dagger(&v)),
        })
    }

    fn check_space(&self, other: &Operator) {
        assert!(
            self.space == other.space,
            "space mismatch: {:?} vs {:?}",
            self.space.kind,
            other.space.kind
        );
    }
}

impl<'a> Add<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn add(self, rhs: &'a Operator) -> Operator {
        self.check_space(rhs);
        Operator {
            space: self.space,
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl<'a> Sub<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn sub(self, rhs: &'a Operator) -> Operator {
        self.check_space(rhs);
        Operator {
            space: self.space,
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

impl<'a> Mul<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn mul(self, rhs: &'a Operator) -> Operator {
        self.dot(rhs)
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale_real(-1.0)
    }
}

/// Density matrix: Hermitian, unit trace, positive semidefinite within the
/// crate tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: Operator,
}

impl DensityMatrix {
    pub fn new(op: Operator) -> Result<Self> {
        let herm = op.hermiticity_defect();
        let scale = op.max_abs().max(1.0);
        if herm > HERMITICITY_TOL * scale {
            return Err(Error::InvalidDensity(format!("not Hermitian: defect {herm:.3e}")));
        }
        let tr = op.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr} differs from one")));
        }
        let min = op.min_eigenvalue()?;
        if min < -POSITIVITY_TOL {
            return Err(Error::InvalidDensity(format!("smallest eigenvalue {min:.3e}")));
        }
        Ok(DensityMatrix { op })
    }

    /// `|psi><psi| / <psi|psi>`
    pub fn pure(space: &HilbertSpace, ket: &Array1<C64>) -> Result<Self> {
        let norm2 = norm_sqr(ket);
        if norm2 <= 0.0 || !norm2.is_finite() {
            return Err(Error::InvalidDensity("zero state vector".into()));
        }
        let ket = ket.mapv(|z| z / norm2.sqrt());
        Self::new(Operator::outer(space, &ket, &ket))
    }

    /// Maximally mixed state `1/d`.
    pub fn maximally_mixed(space: &HilbertSpace) -> Self {
        let d = space.dim();
        DensityMatrix {
            op: Operator::identity(space).scale_real(1.0 / d as f64),
        }
    }

    /// Random full-rank state `G G^dag / Tr(G G^dag)` from a complex Ginibre matrix.
    pub fn random<R: Rng + ?Sized>(space: &HilbertSpace, rng: &mut R) -> Self {
        let d = space.dim();
        let g = random_ginibre(d, d, rng);
        let m = g.dot(&dagger(&g));
        let tr = m.diag().sum().re;
        let m = hermitian_part(&m.mapv(|z| z / tr));
        DensityMatrix {
            op: Operator::from_matrix(*space, m),
        }
    }

    /// Random pure state drawn uniformly from the unit sphere.
    pub fn random_pure<R: Rng + ?Sized>(space: &HilbertSpace, rng: &mut R) -> Self {
        let ket = random_ket(space.dim(), rng);
        Self::pure(space, &ket).expect("random ket is nonzero")
    }

    pub fn op(&self) -> &Operator {
        &self.op
    }

    pub fn into_operator(self) -> Operator {
        self.op
    }

    pub fn matrix(&self) -> &Array2<C64> {
        self.op.matrix()
    }

    pub fn space(&self) -> &HilbertSpace {
        self.op.space()
    }

    /// `Tr(rho A)`
    pub fn expect(&self, a: &Operator) -> C64 {
        let m = self.op.matrix();
        let a = a.matrix();
        let d = m.nrows();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                acc += m[[i, j]] * a[[j, i]];
            }
        }
        acc
    }

    pub fn population(&self, k: usize) -> f64 {
        self.op.matrix()[[k, k]].re
    }

    /// `<psi|rho|psi>` for a normalized ket.
    pub fn fidelity_with_pure(&self, ket: &Array1<C64>) -> f64 {
        self.op.sandwich(ket, ket).re
    }

    pub fn purity(&self) -> f64 {
        self.op.matrix().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Half the trace norm of the difference.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        Ok(0.5 * (&self.op - &other.op).trace_norm()?)
    }
}

pub(crate) fn dagger(m: &Array2<C64>) -> Array2<C64> {
    m.t().mapv(|z| z.conj())
}

/// Eigen decomposition of the Hermitian part of `m`. The input is copied to
/// column-major layout first: for row-major complex input the LAPACK binding
/// returns the complex conjugates of the eigenvectors.
pub(crate) fn eigh_hermitian(m: &Array2<C64>) -> Result<(Array1<f64>, Array2<C64>)> {
    let d = m.nrows();
    let mut f = Array2::<C64>::zeros((d, d).f());
    f.assign(&hermitian_part(m));
    Ok(f.eigh(UPLO::Lower)?)
}

pub(crate) fn hermitian_part(m: &Array2<C64>) -> Array2<C64> {
    let d = m.nrows();
    Array2::from_shape_fn((d, d), |(i, j)| (m[[i, j]] + m[[j, i]].conj()) * 0.5)
}

pub(crate) fn max_abs(m: &Array2<C64>) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

pub(crate) fn norm_sqr(v: &Array1<C64>) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

pub(crate) fn inner(a: &Array1<C64>, b: &Array1<C64>) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn min_eigenvalue_of(m: &Array2<C64>) -> Result<f64> {
    Ok(eigh_hermitian(m)?.0[0])
}

pub(crate) fn trace_norm(m: &Array2<C64>) -> Result<f64> {
    let scale = max_abs(m);
    if scale == 0.0 {
        return Ok(0.0);
    }
    let d = m.nrows();
    let mut herm = 0.0f64;
    for i in 0..d {
        for j in i..d {
            herm = herm.max((m[[i, j]] - m[[j, i]].conj()).norm());
        }
    }
    if herm <= 1e-14 * scale {
        let (e, _) = eigh_hermitian(m)?;
        return Ok(e.iter().map(|x| x.abs()).sum());
    }
    let (_, s, _) = m.svd(false, false)?;
    Ok(s.sum())
}

pub(crate) fn random_ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Array2<C64> {
    Array2::from_shape_fn((rows, cols), |_| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub(crate) fn random_ket<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Array1<C64> {
    let v = Array1::from_shape_fn(d, |_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let n = norm_sqr(&v).sqrt();
    v.mapv(|z| z / n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_states_satisfy_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = HilbertSpace::fock(6).unwrap();
        for _ in 0..10 {
            let rho = DensityMatrix::random(&s, &mut rng);
            DensityMatrix::new(rho.op().clone()).unwrap();
            let psi = DensityMatrix::random_pure(&s, &mut rng);
            assert!((psi.purity() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn density_rejections() {
        let s = HilbertSpace::qubit();
        let mut m = Array2::zeros((2, 2));
        m[[0, 0]] = C64::new(1.5, 0.0);
        m[[1, 1]] = C64::new(-0.5, 0.0);
        assert!(DensityMatrix::new(Operator::from_matrix(s, m.clone())).is_err());
        m[[1, 1]] = C64::new(0.5, 0.0);
        assert!(DensityMatrix::new(Operator::from_matrix(s, m.clone())).is_err());
        m[[0, 0]] = C64::new(0.5, 0.0);
        m[[0, 1]] = C64::new(0.1, 0.0);
        assert!(DensityMatrix::new(Operator::from_matrix(s, m)).is_err());
    }

    #[test]
    fn trace_norm_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = HilbertSpace::fock(5).unwrap();
        let a = DensityMatrix::random(&s, &mut rng);
        let b = DensityMatrix::random(&s, &mut rng);
        let diff = (a.op() - b.op()).into_matrix();
        let herm = trace_norm(&diff).unwrap();
        let (_, sv, _) = diff.svd(false, false).unwrap();
        assert!((herm - sv.sum()).abs() < 1e-12);
    }

    #[test]
    fn hermitian_exponential_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = HilbertSpace::fock(4).unwrap();
        let h = DensityMatrix::random(&s, &mut rng).into_operator();
        let u = h.exp_hermitian(C64::new(0.0, 2.5)).unwrap();
        let uu = u.dag().dot(&u);
        assert!((&uu - &Operator::identity(&s)).max_abs() < 1e-12);
        let via_pade = crate::expm::expm(&h.matrix().mapv(|z| z * C64::new(0.0, 2.5))).unwrap();
        let err = max_abs(&(&via_pade - u.matrix()));
        assert!(err < 1e-12, "{err}");
    }
}
