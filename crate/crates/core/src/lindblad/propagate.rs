//! Propagation of density matrices under a Lindblad generator.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::expm::expm_action;
use crate::lindblad::LindbladGenerator;
use crate::operator::{hermitian_part, max_abs, DensityMatrix, Operator};
use crate::superop::{devectorize, vectorize, LinearMap, Superoperator};
use crate::C64;

/// Spaces up to this dimension are propagated with the dense `d^2 x d^2`
/// exponential; larger ones with the exponential action.
const DENSE_LIMIT: usize = 16;

/// `exp(t L)` as a dense superoperator.
pub fn propagator(gen: &LindbladGenerator, t: f64) -> Result<Superoperator> {
    check_time(t)?;
    gen.superop().exp(t)
}

/// `exp(t L)[x]` for an arbitrary operator; no state invariants are checked.
pub fn evolve_operator(gen: &LindbladGenerator, x: &Operator, t: f64) -> Result<Operator> {
    check_time(t)?;
    if t == 0.0 {
        return Ok(x.clone());
    }
    let space = *gen.space();
    let d = space.dim();
    if d <= DENSE_LIMIT {
        return propagator(gen, t)?.apply(x);
    }
    let mu = gen.mean_diagonal();
    let bound = gen.shifted_norm_bound(mu);
    let apply = |v: &Array1<C64>| {
        let op = devectorize(&space, v).expect("length follows the space");
        vectorize(&gen.apply(&op))
    };
    let out = expm_action(apply, C64::new(mu, 0.0), bound, t, &vectorize(x));
    devectorize(&space, &out)
}

/// `rho_t = exp(t L)[rho_0]`. The result is checked against the density
/// matrix invariants; a failure is reported as positivity loss.
pub fn evolve_expm(gen: &LindbladGenerator, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    if t == 0.0 {
        check_time(t)?;
        return Ok(rho0.clone());
    }
    let out = evolve_operator(gen, rho0.op(), t)?;
    to_density(out)
}

/// States at each of the (nondecreasing) `times`, chaining the semigroup
/// from one sample to the next.
pub fn evolve_expm_times(
    gen: &LindbladGenerator,
    rho0: &DensityMatrix,
    times: &[f64],
) -> Result<Vec<DensityMatrix>> {
    let mut out = Vec::with_capacity(times.len());
    let mut current = rho0.op().clone();
    let mut now = 0.0;
    for &t in times {
        check_time(t)?;
        if t < now {
            return Err(Error::param("times", "sample times must be nondecreasing"));
        }
        current = evolve_operator(gen, &current, t - now)?;
        now = t;
        out.push(to_density(current.clone())?);
    }
    Ok(out)
}

fn check_time(t: f64) -> Result<()> {
    if t < 0.0 || !t.is_finite() {
        return Err(Error::NegativeTime(t));
    }
    Ok(())
}

fn to_density(op: Operator) -> Result<DensityMatrix> {
    let herm = Operator::from_matrix(*op.space(), hermitian_part(op.matrix()));
    DensityMatrix::new(herm).map_err(|e| match e {
        Error::InvalidDensity(msg) => Error::PositivityLoss(msg),
        other => other,
    })
}

// Dormand-Prince 5(4) tableau; the generator is autonomous so the nodes
// are not needed.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const MAX_STEPS: usize = 10_000_000;

/// Adaptive Dormand-Prince integration of `d rho / dt = L[rho]` using only
/// the operator-level action of the map. The tolerance is split evenly:
/// absolute and relative parts are each `rel_tol / 2`.
pub fn evolve_ode<M: LinearMap + ?Sized>(map: &M, rho0: &DensityMatrix, t: f64, rel_tol: f64) -> Result<DensityMatrix> {
    let out = integrate(map, rho0.op(), t, rel_tol)?;
    to_density(out)
}

/// As [`evolve_ode`] but for an arbitrary operator without invariant checks.
pub fn integrate<M: LinearMap + ?Sized>(map: &M, x0: &Operator, t: f64, rel_tol: f64) -> Result<Operator> {
    check_time(t)?;
    if !(rel_tol > 1e-14 && rel_tol < 1e-3) {
        return Err(Error::param("rel_tol", format!("must lie in (1e-14, 1e-3), got {rel_tol}")));
    }
    let space = *map.space();
    let f = |y: &Array2<C64>| -> Array2<C64> {
        map.apply_to(&Operator::from_matrix(space, y.clone())).into_matrix()
    };
    let atol = rel_tol / 2.0;
    let rtol = rel_tol / 2.0;

    let mut y = x0.matrix().clone();
    if t == 0.0 {
        return Ok(x0.clone());
    }
    let mut k1 = f(&y);
    let mut now = 0.0;
    let d1 = max_abs(&k1);
    let mut h = if d1 == 0.0 {
        t
    } else {
        (0.01 * max_abs(&y).max(atol) / d1).min(t)
    };
    let mut steps = 0;
    while now < t {
        steps += 1;
        if steps > MAX_STEPS || h < 1e-14 * t.max(1.0) {
            return Err(Error::StiffnessFailure { t: now, step: h });
        }
        let last = now + h >= t;
        if last {
            h = t - now;
        }
        let mut ks: Vec<Array2<C64>> = Vec::with_capacity(7);
        ks.push(k1.clone());
        let mut y_new = y.clone();
        for stage in 1..7 {
            let mut arg = y.clone();
            for (j, kj) in ks.iter().enumerate() {
                let a = A[stage][j];
                if a != 0.0 {
                    arg.scaled_add(C64::new(h * a, 0.0), kj);
                }
            }
            if stage == 6 {
                y_new = arg.clone();
            }
            ks.push(f(&arg));
        }
        let mut err = 0.0f64;
        {
            let mut e = Array2::<C64>::zeros(y.dim());
            for (j, kj) in ks.iter().enumerate() {
                if E[j] != 0.0 {
                    e.scaled_add(C64::new(h * E[j], 0.0), kj);
                }
            }
            for ((ei, yi), yn) in e.iter().zip(y.iter()).zip(y_new.iter()) {
                let scale = atol + rtol * yi.norm().max(yn.norm());
                err = err.max(ei.norm() / scale);
            }
        }
        if err <= 1.0 {
            now = if last { t } else { now + h };
            y = y_new;
            k1 = ks.pop().expect("seven stages");
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        if err > 1.0 {
            h *= factor.min(1.0);
        } else {
            h *= factor;
        }
    }
    Ok(Operator::from_matrix(space, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{fock_ops, pauli_ops, HilbertSpace};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn decay(eta: f64) -> LindbladGenerator {
        let q = HilbertSpace::qubit();
        let p = pauli_ops(&q).unwrap();
        LindbladGenerator::new(p.sigma_z.scale_real(0.5), vec![p.sigma_minus.scale_real(eta.sqrt())]).unwrap()
    }

    fn dho(dim: usize) -> LindbladGenerator {
        let s = HilbertSpace::fock(dim).unwrap();
        let f = fock_ops(&s).unwrap();
        let (eta, nb): (f64, f64) = (0.4, 0.3);
        LindbladGenerator::new(
            f.number.clone(),
            vec![f.a.scale_real((eta * (nb + 1.0)).sqrt()), f.a_dagger.scale_real((eta * nb).sqrt())],
        )
        .unwrap()
    }

    #[test]
    fn zero_time_is_identity() {
        let g = decay(1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rho = DensityMatrix::random(g.space(), &mut rng);
        assert_eq!(evolve_expm(&g, &rho, 0.0).unwrap(), rho);
    }

    #[test]
    fn negative_time_rejected() {
        let g = decay(1.0);
        let rho = DensityMatrix::maximally_mixed(g.space());
        assert!(matches!(evolve_expm(&g, &rho, -1.0), Err(Error::NegativeTime(_))));
    }

    #[test]
    fn excited_state_decay() {
        let g = decay(1.0);
        let excited = ndarray::arr1(&[C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
        let rho = DensityMatrix::pure(g.space(), &excited).unwrap();
        let out = evolve_expm(&g, &rho, 1.0).unwrap();
        assert!((out.population(1) - (-1.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn semigroup_law_and_cp() {
        let g = dho(6);
        let (t, s) = (0.7, 0.45);
        let ut = propagator(&g, t).unwrap();
        let us = propagator(&g, s).unwrap();
        let uts = propagator(&g, t + s).unwrap();
        assert!((&uts - &ut.compose(&us).unwrap()).max_abs() <= 1e-10);
        for &tt in &[0.01, 0.1, 1.0] {
            let min = propagator(&g, tt).unwrap().choi_min_eigenvalue().unwrap();
            assert!(min >= -1e-9, "{tt}: {min}");
        }
    }

    #[test]
    fn action_route_matches_dense_route() {
        let g = dho(20);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = DensityMatrix::random(g.space(), &mut rng);
        let via_action = evolve_expm(&g, &rho, 2.3).unwrap();
        let dense = propagator(&g, 2.3).unwrap().apply(rho.op()).unwrap();
        assert!((via_action.op() - &dense).max_abs() < 1e-12);
        let tr = via_action.op().trace();
        assert!((tr.re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ode_matches_expm_and_preserves_trace() {
        let g = dho(10);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho = DensityMatrix::random(g.space(), &mut rng);
        let a = evolve_expm(&g, &rho, 3.0).unwrap();
        let b = evolve_ode(&g, &rho, 3.0, 1e-9).unwrap();
        let diff = (a.op() - b.op()).trace_norm().unwrap();
        assert!(diff <= 1e-8, "{diff}");
        assert!((b.op().trace().re - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ode_zero_generator() {
        let s = HilbertSpace::fock(4).unwrap();
        let g = LindbladGenerator::zero(&s);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let rho = DensityMatrix::random(&s, &mut rng);
        assert_eq!(evolve_ode(&g, &rho, 2.0, 1e-8).unwrap(), DensityMatrix::new(rho.op().hermitian_part()).unwrap());
    }

    #[test]
    fn chained_times_match_direct() {
        let g = dho(8);
        let rho = DensityMatrix::maximally_mixed(g.space());
        let states = evolve_expm_times(&g, &rho, &[0.5, 1.0, 2.5]).unwrap();
        let direct = evolve_expm(&g, &rho, 2.5).unwrap();
        assert!((states[2].op() - direct.op()).max_abs() < 1e-12);
    }
}
