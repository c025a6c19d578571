//! Weyl relations on the grid lattice and phase covariance of the damped
//! oscillator.

use covdyn::covariance::{covariance_residual, generalized_weyl_residual, weyl_residual, Group, UnitaryRep};
use covdyn::models::{dho_generator, DHOParams, Temperature};
use covdyn::{DensityMatrix, HilbertSpace};
use rand::SeedableRng;

fn main() -> covdyn::Result<()> {
    let grid = HilbertSpace::centered_grid(32, 1.0)?;
    let dp = grid.grid()?.dp();
    for (a, q) in [(1.0, dp), (3.0, 2.0 * dp), (0.5, dp)] {
        let w = weyl_residual(&grid, a, q)?;
        println!("weyl a = {a}, q = {q:.4}: {:.2e} (on lattice: {})", w.residual, w.on_lattice);
    }

    let fock = HilbertSpace::fock(12)?;
    println!("generalized weyl, m = 2: {:.2e}", generalized_weyl_residual(&fock, 0.7, 2)?);

    let p = DHOParams::new(1.0, 0.3, Temperature::Beta(1.0), 12);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let samples: Vec<DensityMatrix> = (0..5).map(|_| DensityMatrix::random(&fock, &mut rng)).collect();
    let rep = UnitaryRep::new(Group::U1Phase, &fock)?;
    let r = covariance_residual(&dho_generator(&p)?, &rep, &[0.3, 1.7, 3.0], &samples)?;
    println!("dho U(1) residual: {r:.2e}");
    Ok(())
}
