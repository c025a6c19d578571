//! Most general SO(2)-covariant qubit generator: the Lindblad form against
//! the explicit Pauli-basis superoperator, and its covariance residual.

use covdyn::covariance::{covariance_residual, Group, UnitaryRep};
use covdyn::models::{rotation_covariant_explicit, rotation_covariant_generator, RotCovParams};
use covdyn::{DensityMatrix, HilbertSpace};
use rand::SeedableRng;

fn main() -> covdyn::Result<()> {
    let p = RotCovParams::new(0.4, 0.15, 0.1, 0.5);
    let gen = rotation_covariant_generator(&p)?;
    let explicit = rotation_covariant_explicit(&p)?;
    println!("lindblad vs explicit: {:.2e}", (&gen.superop() - &explicit).max_abs());

    let space = HilbertSpace::qubit();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let samples: Vec<DensityMatrix> = (0..8).map(|_| DensityMatrix::random(&space, &mut rng)).collect();
    let rep = UnitaryRep::new(Group::So2Spin, &space)?;
    let r = covariance_residual(&gen, &rep, &[0.3, 1.7, std::f64::consts::PI], &samples)?;
    println!("so2 covariance residual: {r:.2e}");
    Ok(())
}
