//! Caldeira-Leggett dynamics on a position grid: momentum decay of a moving
//! packet and decoherence of a spatial cat.

use covdyn::lindblad::evolve_expm_times;
use covdyn::models::{qbm_exact_solution, qbm_generator, qbm_moment_oracles, QBMParams};
use covdyn::space::grid_ops;
use covdyn::states::gaussian_packet;
use covdyn::{DensityMatrix, HilbertSpace};

fn main() -> covdyn::Result<()> {
    let space = HilbertSpace::centered_grid(128, 0.25)?;
    let p = QBMParams::new(space, 1.0, 0.2, 2.0);
    println!("D_pp = {:.4}, D_xx = {:.4}, thermal length {:.4}", p.d_pp(), p.d_xx(), p.thermal_length());
    let ops = grid_ops(&space)?;
    let rho0 = DensityMatrix::pure(&space, &gaussian_packet(&space, 0.0, 1.0, 1.5)?)?;
    let times = [0.0, 1.0, 2.0, 4.0];
    let states = evolve_expm_times(&qbm_generator(&p)?, &rho0, &times)?;
    for (t, rho) in times.iter().zip(&states) {
        let (p_mean, _) = qbm_moment_oracles(&p, &rho0, *t)?;
        println!("t = {t:3.1}  <p> = {:.6}  oracle {p_mean:.6}", rho.expect(&ops.p_hat).re);
    }

    let free = p.frictionless();
    let cat = &gaussian_packet(&space, -3.0, 0.0, 0.8)? + &gaussian_packet(&space, 3.0, 0.0, 0.8)?;
    let norm: f64 = cat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let rho_cat = DensityMatrix::pure(&space, &cat.mapv(|z| z / norm))?;
    let (i, j) = (52, 76);
    for t in [0.0, 0.5, 1.0, 2.0] {
        let rho = qbm_exact_solution(&space, &free.diffusion(), rho_cat.op(), t)?;
        println!("t = {t:3.1}  |<x_i|rho|x_j>| = {:.3e}", rho.matrix()[[i, j]].norm());
    }
    Ok(())
}
