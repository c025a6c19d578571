//! Linear maps on operators, stored as `d^2 x d^2` matrices acting on
//! column-major vectorized operators: `vec(A X B) = (B^T ⊗ A) vec(X)`.

use std::ops::{Add, Sub};

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::expm;
use crate::operator::{dagger, Operator};
use crate::space::HilbertSpace;
use crate::C64;

/// Anything that maps operators to operators linearly on one space.
pub trait LinearMap {
    fn space(&self) -> &HilbertSpace;
    fn apply_to(&self, x: &Operator) -> Operator;
}

#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    space: HilbertSpace,
    matrix: Array2<C64>,
}

/// Column-major flattening, index `i + j d` holds `X[i, j]`.
pub fn vectorize(x: &Operator) -> Array1<C64> {
    let m = x.matrix();
    let d = m.nrows();
    Array1::from_shape_fn(d * d, |k| m[[k % d, k / d]])
}

pub fn devectorize(space: &HilbertSpace, v: &Array1<C64>) -> Result<Operator> {
    let d = space.dim();
    if v.len() != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            got: v.len(),
        });
    }
    Ok(Operator::from_matrix(
        *space,
        Array2::from_shape_fn((d, d), |(i, j)| v[i + j * d]),
    ))
}

/// `B^T ⊗ A`, the matrix of `X -> A X B`.
pub(crate) fn sandwich_matrix(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let d = a.nrows();
    let dd = d * d;
    let mut out = Array2::zeros((dd, dd));
    for l in 0..d {
        for j in 0..d {
            let blj = b[[l, j]];
            if blj == C64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..d {
                for i in 0..d {
                    out[[i + j * d, k + l * d]] = a[[i, k]] * blj;
                }
            }
        }
    }
    out
}

impl Superoperator {
    pub fn new(space: HilbertSpace, matrix: Array2<C64>) -> Result<Self> {
        let dd = space.dim() * space.dim();
        if matrix.dim() != (dd, dd) {
            return Err(Error::DimensionMismatch {
                expected: dd,
                got: matrix.nrows(),
            });
        }
        Ok(Superoperator { space, matrix })
    }

    pub fn identity(space: &HilbertSpace) -> Self {
        let dd = space.dim() * space.dim();
        Superoperator {
            space: *space,
            matrix: Array2::eye(dd),
        }
    }

    pub fn zeros(space: &HilbertSpace) -> Self {
        let dd = space.dim() * space.dim();
        Superoperator {
            space: *space,
            matrix: Array2::zeros((dd, dd)),
        }
    }

    /// `X -> A X B`
    pub fn sandwich(a: &Operator, b: &Operator) -> Self {
        Superoperator {
            space: *a.space(),
            matrix: sandwich_matrix(a.matrix(), b.matrix()),
        }
    }

    /// `X -> U X U^dag`
    pub fn conjugation(u: &Operator) -> Self {
        Self::sandwich(u, &u.dag())
    }

    /// `X -> sum_i V_i X V_i^dag`
    pub fn from_kraus(space: &HilbertSpace, kraus: &[Operator]) -> Self {
        let mut out = Self::zeros(space);
        for v in kraus {
            out.matrix = &out.matrix + &sandwich_matrix(v.matrix(), &dagger(v.matrix()));
        }
        out
    }

    /// `X -> X^T`, the canonical positive but not completely positive map.
    pub fn transpose_map(space: &HilbertSpace) -> Self {
        let d = space.dim();
        let mut m = Array2::zeros((d * d, d * d));
        for i in 0..d {
            for j in 0..d {
                m[[j + i * d, i + j * d]] = C64::new(1.0, 0.0);
            }
        }
        Superoperator { space: *space, matrix: m }
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Array2<C64> {
        self.matrix
    }

    pub fn apply(&self, x: &Operator) -> Result<Operator> {
        self.check(x.space())?;
        devectorize(&self.space, &self.matrix.dot(&vectorize(x)))
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Superoperator) -> Result<Superoperator> {
        self.check(&other.space)?;
        Ok(Superoperator {
            space: self.space,
            matrix: self.matrix.dot(&other.matrix),
        })
    }

    pub fn scale(&self, factor: C64) -> Superoperator {
        Superoperator {
            space: self.space,
            matrix: self.matrix.mapv(|z| z * factor),
        }
    }

    /// Heisenberg-picture dual: `Tr(X^dag M[rho]) = Tr((M'[X])^dag rho)`.
    pub fn adjoint(&self) -> Superoperator {
        Superoperator {
            space: self.space,
            matrix: dagger(&self.matrix),
        }
    }

    /// `exp(t S)` by scaling and squaring.
    pub fn exp(&self, t: f64) -> Result<Superoperator> {
        let m = self.matrix.mapv(|z| z * t);
        Ok(Superoperator {
            space: self.space,
            matrix: expm::expm(&m)?,
        })
    }

    pub fn max_abs(&self) -> f64 {
        crate::operator::max_abs(&self.matrix)
    }

    /// Choi matrix `sum_ij |i><j| ⊗ S[|i><j|]` on the doubled space; the map
    /// is completely positive iff it is positive semidefinite.
    pub fn choi_matrix(&self) -> Array2<C64> {
        let d = self.space.dim();
        let mut c = Array2::zeros((d * d, d * d));
        for i in 0..d {
            for j in 0..d {
                let col = i + j * d;
                for a in 0..d {
                    for b in 0..d {
                        c[[i * d + a, j * d + b]] = self.matrix[[a + b * d, col]];
                    }
                }
            }
        }
        c
    }

    /// Smallest eigenvalue of the Hermitian part of the Choi matrix.
    pub fn choi_min_eigenvalue(&self) -> Result<f64> {
        let c = self.choi_matrix();
        let dd = c.nrows();
        let space = HilbertSpace::new(crate::space::SpaceKind::Fock { dim: dd.max(2) }, 1.0)?;
        Operator::from_matrix(space, c).min_eigenvalue()
    }

    fn check(&self, other: &HilbertSpace) -> Result<()> {
        if &self.space != other {
            return Err(Error::SpaceMismatch(format!(
                "{:?} vs {:?}",
                self.space.kind, other.kind
            )));
        }
        Ok(())
    }
}

impl LinearMap for Superoperator {
    fn space(&self) -> &HilbertSpace {
        &self.space
    }

    fn apply_to(&self, x: &Operator) -> Operator {
        self.apply(x).expect("superoperator and operator share a space")
    }
}

impl<'a> Add<&'a Superoperator> for &'a Superoperator {
    type Output = Superoperator;
    fn add(self, rhs: &'a Superoperator) -> Superoperator {
        assert_eq!(self.space, rhs.space, "space mismatch");
        Superoperator {
            space: self.space,
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl<'a> Sub<&'a Superoperator> for &'a Superoperator {
    type Output = Superoperator;
    fn sub(self, rhs: &'a Superoperator) -> Superoperator {
        assert_eq!(self.space, rhs.space, "space mismatch");
        Superoperator {
            space: self.space,
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

/// Completely positive map in Kraus form, `X -> sum_i V_i X V_i^dag`.
#[derive(Debug, Clone)]
pub struct KrausMap {
    space: HilbertSpace,
    ops: Vec<Operator>,
}

impl KrausMap {
    pub fn new(space: &HilbertSpace, ops: Vec<Operator>) -> Result<Self> {
        for v in &ops {
            if v.space() != space {
                return Err(Error::SpaceMismatch(format!("kraus operator on {:?}", v.space().kind)));
            }
        }
        Ok(KrausMap { space: *space, ops })
    }

    pub fn ops(&self) -> &[Operator] {
        &self.ops
    }

    pub fn apply(&self, x: &Operator) -> Operator {
        let mut out = Operator::zeros(&self.space);
        for v in &self.ops {
            out = &out + &v.dot(x).dot(&v.dag());
        }
        out
    }

    /// Heisenberg dual `X -> sum_i V_i^dag X V_i`.
    pub fn apply_adjoint(&self, x: &Operator) -> Operator {
        let mut out = Operator::zeros(&self.space);
        for v in &self.ops {
            out = &out + &v.dag().dot(x).dot(v);
        }
        out
    }

    /// `self ∘ other`, with Kraus operators `V_i W_j`.
    pub fn compose(&self, other: &KrausMap) -> KrausMap {
        let ops = self
            .ops
            .iter()
            .flat_map(|v| other.ops.iter().map(move |w| v.dot(w)))
            .collect();
        KrausMap { space: self.space, ops }
    }

    pub fn superop(&self) -> Superoperator {
        Superoperator::from_kraus(&self.space, &self.ops)
    }
}

impl LinearMap for KrausMap {
    fn space(&self) -> &HilbertSpace {
        &self.space
    }

    fn apply_to(&self, x: &Operator) -> Operator {
        self.apply(x)
    }
}

/// `Tr(A^dag B)`
pub fn hs_inner(a: &Operator, b: &Operator) -> C64 {
    a.matrix()
        .iter()
        .zip(b.matrix().iter())
        .map(|(x, y)| x.conj() * y)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::DensityMatrix;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_trip_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = HilbertSpace::fock(5).unwrap();
        let rho = DensityMatrix::random(&s, &mut rng);
        let back = devectorize(&s, &vectorize(rho.op())).unwrap();
        assert_eq!(&back, rho.op());
    }

    #[test]
    fn sandwich_matches_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = HilbertSpace::fock(4).unwrap();
        let a = DensityMatrix::random(&s, &mut rng).into_operator().scale(C64::new(0.3, 1.0));
        let b = DensityMatrix::random(&s, &mut rng).into_operator();
        let x = DensityMatrix::random(&s, &mut rng).into_operator();
        let direct = a.dot(&x).dot(&b);
        let via = Superoperator::sandwich(&a, &b).apply(&x).unwrap();
        assert!((&direct - &via).max_abs() < 1e-14);
    }

    #[test]
    fn identity_choi_is_scaled_entangled_projector() {
        let s = HilbertSpace::qubit();
        let c = Superoperator::identity(&s).choi_matrix();
        // d |Omega><Omega| with |Omega> = sum_i |ii>/sqrt(d)
        for r in 0..4 {
            for k in 0..4 {
                let expected = if r % 3 == 0 && k % 3 == 0 { 1.0 } else { 0.0 };
                assert_eq!(c[[r, k]], C64::new(expected, 0.0));
            }
        }
        assert!(Superoperator::identity(&s).choi_min_eigenvalue().unwrap() > -1e-14);
    }

    #[test]
    fn transpose_map_is_not_cp() {
        let s = HilbertSpace::qubit();
        let t = Superoperator::transpose_map(&s);
        let min = t.choi_min_eigenvalue().unwrap();
        assert!((min + 1.0).abs() < 1e-12);
    }

    #[test]
    fn adjoint_of_unitary_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = HilbertSpace::fock(3).unwrap();
        let h = DensityMatrix::random(&s, &mut rng).into_operator();
        let u = h.exp_hermitian(C64::new(0.0, 1.3)).unwrap();
        let adj = Superoperator::conjugation(&u).adjoint();
        let expected = Superoperator::conjugation(&u.dag());
        assert!((&adj - &expected).max_abs() < 1e-14);
    }

    fn kraus_channel(seed: u64, d: usize, n: usize) -> Superoperator {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = HilbertSpace::fock(d).unwrap();
        let ops: Vec<Operator> = (0..n)
            .map(|_| {
                Operator::from_matrix(s, crate::operator::random_ginibre(d, d, &mut rng))
            })
            .collect();
        Superoperator::from_kraus(&s, &ops)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn kraus_maps_have_psd_choi(seed in 0u64..10_000, d in 2usize..5, n in 1usize..4) {
            let m = kraus_channel(seed, d, n);
            prop_assert!(m.choi_min_eigenvalue().unwrap() >= -1e-10);
        }

        #[test]
        fn apply_is_linear(seed in 0u64..10_000, alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = HilbertSpace::fock(3).unwrap();
            let m = Superoperator::new(s, crate::operator::random_ginibre(9, 9, &mut rng)).unwrap();
            let r1 = DensityMatrix::random(&s, &mut rng).into_operator();
            let r2 = DensityMatrix::random(&s, &mut rng).into_operator();
            let combo = &r1.scale_real(alpha) + &r2.scale_real(beta);
            let lhs = m.apply(&combo).unwrap();
            let rhs = &m.apply(&r1).unwrap().scale_real(alpha) + &m.apply(&r2).unwrap().scale_real(beta);
            prop_assert!((&lhs - &rhs).max_abs() < 1e-12);
        }

        #[test]
        fn adjoint_duality(seed in 0u64..10_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = HilbertSpace::fock(3).unwrap();
            let m = Superoperator::new(s, crate::operator::random_ginibre(9, 9, &mut rng)).unwrap();
            let x = Operator::from_matrix(s, crate::operator::random_ginibre(3, 3, &mut rng));
            let rho = DensityMatrix::random(&s, &mut rng).into_operator();
            let lhs = hs_inner(&x, &m.apply(&rho).unwrap());
            let rhs = hs_inner(&m.adjoint().apply(&x).unwrap(), &rho);
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }
    }
}
