//! Covariant joint position-momentum POVM from a Gaussian seed: frame
//! completeness, the marginals and the instrument acting on a packet.

use covdyn::measurement::{apply_instrument, joint_xp_instrument, joint_xp_povm, offset_moments, Region, SeedState};
use covdyn::states::gaussian_packet;
use covdyn::{DensityMatrix, HilbertSpace};

fn main() -> covdyn::Result<()> {
    let space = HilbertSpace::centered_grid(32, 1.0)?;
    let grid = space.grid()?;
    let seed = SeedState::gaussian(&space, 2.0)?;
    let povm = joint_xp_povm(&space, &seed, 1e-6)?;
    println!("normalization defect {:.2e}", povm.normalization_defect());

    let (vx, vp) = (
        offset_moments(&seed.position_density()?, grid.dx).1,
        offset_moments(&seed.momentum_density()?, grid.dp()).1,
    );
    println!("added noise product / (hbar^2/4) = {:.6}", vx * vp / 0.25);

    let rho = DensityMatrix::pure(&space, &gaussian_packet(&space, 2.0, 0.5, 2.0)?)?;
    let (mx, _) = povm.marginals()?;
    let right = Region::interval(16, 32);
    println!("P(x > 0) = {:.6}", mx.probability(&rho, &right)?);

    let inst = joint_xp_instrument(&space, &seed, 1e-6)?;
    let cell = Region::rect(&Region::interval(16, 20), &Region::interval(0, 4));
    let o = apply_instrument(&inst, &rho, &cell)?;
    println!("P(cell) = {:.6}, posterior purity {:.4}", o.probability, o.posterior.purity());
    Ok(())
}
