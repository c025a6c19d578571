use ndarray::Array2;

use crate::error::{Error, Result};
use crate::expm::norm1;
use crate::operator::{dagger, Operator, HERMITICITY_TOL};
use crate::space::HilbertSpace;
use crate::superop::{sandwich_matrix, LinearMap, Superoperator};
use crate::C64;

/// `L[rho] = -(i/hbar)[H, rho] + sum_j (L_j rho L_j^dag - 1/2 {L_j^dag L_j, rho})`
#[derive(Debug, Clone)]
pub struct LindbladGenerator {
    hamiltonian: Operator,
    lindblad_ops: Vec<Operator>,
    k: Operator,
}

impl LindbladGenerator {
    /// Rejects a Hamiltonian whose anti-Hermitian part exceeds the crate
    /// hermiticity tolerance (relative to its largest entry when that is
    /// above one). The stored Hamiltonian is the exact Hermitian part.
    pub fn new(hamiltonian: Operator, lindblad_ops: Vec<Operator>) -> Result<Self> {
        let defect = hamiltonian.hermiticity_defect();
        if defect > HERMITICITY_TOL * hamiltonian.max_abs().max(1.0) {
            return Err(Error::InvalidHamiltonian(defect));
        }
        for l in &lindblad_ops {
            if l.space() != hamiltonian.space() {
                return Err(Error::SpaceMismatch(format!(
                    "lindblad operator on {:?}, hamiltonian on {:?}",
                    l.space().kind,
                    hamiltonian.space().kind
                )));
            }
        }
        let hamiltonian = hamiltonian.hermitian_part();
        let k = effective_k(&hamiltonian, &lindblad_ops);
        Ok(LindbladGenerator {
            hamiltonian,
            lindblad_ops,
            k,
        })
    }

    pub fn unitary(hamiltonian: Operator) -> Result<Self> {
        Self::new(hamiltonian, Vec::new())
    }

    pub fn zero(space: &HilbertSpace) -> Self {
        Self::unitary(Operator::zeros(space)).expect("zero is Hermitian")
    }

    pub fn space(&self) -> &HilbertSpace {
        self.hamiltonian.space()
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.hamiltonian
    }

    pub fn lindblad_ops(&self) -> &[Operator] {
        &self.lindblad_ops
    }

    /// `K = (i/hbar) H + 1/2 sum_j L_j^dag L_j`, so that
    /// `L[rho] = -K rho - rho K^dag + sum_j L_j rho L_j^dag`.
    pub fn effective_k(&self) -> &Operator {
        &self.k
    }

    /// Flattened generator as a `d^2 x d^2` superoperator.
    pub fn superop(&self) -> Superoperator {
        let d = self.space().dim();
        let ident: Array2<C64> = Array2::eye(d);
        let k = self.k.matrix();
        let mut m = sandwich_matrix(k, &ident) + sandwich_matrix(&ident, &dagger(k));
        m.mapv_inplace(|z| -z);
        for l in &self.lindblad_ops {
            m = m + sandwich_matrix(l.matrix(), &dagger(l.matrix()));
        }
        Superoperator::new(*self.space(), m).expect("shape follows the space")
    }

    /// Action on an operator by matrix products, never forming the
    /// superoperator.
    pub fn apply(&self, rho: &Operator) -> Operator {
        let k = self.k.matrix();
        let r = rho.matrix();
        let mut out = -(k.dot(r) + r.dot(&dagger(k)));
        for l in &self.lindblad_ops {
            let lm = l.matrix();
            out = out + lm.dot(r).dot(&dagger(lm));
        }
        Operator::from_matrix(*self.space(), out)
    }

    /// Heisenberg-picture action
    /// `L'[X] = (i/hbar)[H, X] + sum_j (L_j^dag X L_j - 1/2 {L_j^dag L_j, X})`.
    pub fn apply_adjoint(&self, x: &Operator) -> Operator {
        let k = self.k.matrix();
        let xm = x.matrix();
        let mut out = -(dagger(k).dot(xm) + xm.dot(k));
        for l in &self.lindblad_ops {
            let lm = l.matrix();
            out = out + dagger(lm).dot(xm).dot(lm);
        }
        Operator::from_matrix(*self.space(), out)
    }

    /// Trace of the flattened generator divided by `d^2`; a real scalar
    /// shift used by the exponential action.
    pub(crate) fn mean_diagonal(&self) -> f64 {
        let d = self.space().dim() as f64;
        let tr_k = self.k.trace();
        let jump: f64 = self.lindblad_ops.iter().map(|l| l.trace().norm_sqr()).sum();
        (-2.0 * d * tr_k.re + jump) / (d * d)
    }

    /// Upper bound on `||L - mu I||_1` for the flattened generator using
    /// `||B^T (x) A||_1 = ||B||_inf ||A||_1`.
    pub(crate) fn shifted_norm_bound(&self, mu: f64) -> f64 {
        let d = self.space().dim();
        let shifted = self.k.matrix() + &Array2::<C64>::eye(d).mapv(|z| z * (mu / 2.0));
        let n_k = norm1(&shifted);
        let n_k_inf = norm1(&dagger(&shifted));
        let jumps: f64 = self
            .lindblad_ops
            .iter()
            .map(|l| norm1(l.matrix()) * norm1(&dagger(l.matrix())))
            .sum();
        n_k + n_k_inf + jumps
    }
}

impl LinearMap for LindbladGenerator {
    fn space(&self) -> &HilbertSpace {
        LindbladGenerator::space(self)
    }

    fn apply_to(&self, x: &Operator) -> Operator {
        self.apply(x)
    }
}

fn effective_k(h: &Operator, ops: &[Operator]) -> Operator {
    let hbar = h.space().hbar;
    let mut k = h.scale(C64::new(0.0, 1.0 / hbar));
    for l in ops {
        k = &k + &l.dag().dot(l).scale_real(0.5);
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::DensityMatrix;
    use crate::space::{fock_ops, pauli_ops};
    use crate::superop::hs_inner;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn thermal_dho(dim: usize) -> LindbladGenerator {
        let s = HilbertSpace::fock(dim).unwrap();
        let f = fock_ops(&s).unwrap();
        let (eta, nb): (f64, f64) = (0.3, 0.6);
        LindbladGenerator::new(
            f.number.scale_real(1.2),
            vec![f.a.scale_real((eta * (nb + 1.0)).sqrt()), f.a_dagger.scale_real((eta * nb).sqrt())],
        )
        .unwrap()
    }

    #[test]
    fn empty_generator_is_zero() {
        let s = HilbertSpace::fock(3).unwrap();
        assert_eq!(LindbladGenerator::zero(&s).superop().max_abs(), 0.0);
    }

    #[test]
    fn decay_of_excited_projector() {
        let q = HilbertSpace::qubit();
        let p = pauli_ops(&q).unwrap();
        let g = LindbladGenerator::new(Operator::zeros(&q), vec![p.sigma_minus.clone()]).unwrap();
        let excited = p.sigma_plus.dot(&p.sigma_minus);
        let ground = p.sigma_minus.dot(&p.sigma_plus);
        let out = g.superop().apply(&excited).unwrap();
        assert!((&out - &(&ground - &excited)).max_abs() < 1e-15);
        let k_expected = excited.scale_real(0.5);
        assert!((g.effective_k() - &k_expected).max_abs() < 1e-15);
    }

    #[test]
    fn non_hermitian_hamiltonian_rejected() {
        let q = HilbertSpace::qubit();
        let p = pauli_ops(&q).unwrap();
        assert!(matches!(
            LindbladGenerator::unitary(p.sigma_plus),
            Err(Error::InvalidHamiltonian(_))
        ));
    }

    #[test]
    fn unitary_limit_of_k() {
        let q = HilbertSpace::qubit();
        let p = pauli_ops(&q).unwrap();
        let g = LindbladGenerator::unitary(p.sigma_x.clone()).unwrap();
        assert_eq!(g.effective_k(), &p.sigma_x.scale(C64::new(0.0, 1.0)));
    }

    #[test]
    fn dho_generator_trace_and_k() {
        let g = thermal_dho(12);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let sup = g.superop();
        let mut worst: f64 = 0.0;
        for _ in 0..50 {
            let rho = DensityMatrix::random(g.space(), &mut rng);
            worst = worst.max(sup.apply(rho.op()).unwrap().trace().norm());
            let direct = g.apply(rho.op());
            assert!((&direct - &sup.apply(rho.op()).unwrap()).max_abs() < 1e-12);
        }
        assert!(worst <= 1e-13, "{worst}");
        let k = g.effective_k();
        let mut off: f64 = 0.0;
        for i in 0..12 {
            for j in 0..12 {
                if i != j {
                    off = off.max(k.matrix()[[i, j]].norm());
                }
            }
        }
        assert_eq!(off, 0.0);
    }

    #[test]
    fn adjoint_duality_on_random_pairs() {
        let g = thermal_dho(6);
        let sup = g.superop();
        let adj = sup.adjoint();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let x = Operator::from_matrix(*g.space(), crate::operator::random_ginibre(6, 6, &mut rng));
            let rho = DensityMatrix::random(g.space(), &mut rng).into_operator();
            let lhs = hs_inner(&x, &sup.apply(&rho).unwrap());
            let rhs = hs_inner(&adj.apply(&x).unwrap(), &rho);
            assert!((lhs - rhs).norm() < 1e-12);
            let direct = g.apply_adjoint(&x);
            assert!((&direct - &adj.apply(&x).unwrap()).max_abs() < 1e-12);
        }
    }

    #[test]
    fn norm_bound_dominates_exact_norm() {
        let g = thermal_dho(5);
        let mu = g.mean_diagonal();
        let sup = g.superop();
        let exact_mu = sup.matrix().diag().sum() / 25.0;
        assert!((exact_mu.re - mu).abs() < 1e-12 && exact_mu.im.abs() < 1e-12);
        let shifted = sup.matrix() - &Array2::<C64>::eye(25).mapv(|z| z * mu);
        assert!(norm1(&shifted) <= g.shifted_norm_bound(mu) + 1e-12);
    }
}
