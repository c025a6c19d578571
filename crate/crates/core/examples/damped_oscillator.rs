//! Coherent state in a thermal bath: propagated moments against the closed
//! form.

use covdyn::lindblad::evolve_expm_times;
use covdyn::models::{dho_generator, dho_moment_oracles, DHOParams, Temperature};
use covdyn::space::fock_ops;
use covdyn::states::coherent_state;
use covdyn::{DensityMatrix, C64};

fn main() -> covdyn::Result<()> {
    let p = DHOParams::new(1.0, 0.2, Temperature::Beta(1.5), 40);
    let space = p.space()?;
    let ops = fock_ops(&space)?;
    let alpha = C64::new(1.2, 0.4);
    let (psi, _) = coherent_state(&space, alpha)?;
    let rho0 = DensityMatrix::pure(&space, &psi)?;

    let times: Vec<f64> = (0..=10).map(|k| k as f64 * 2.5).collect();
    let states = evolve_expm_times(&dho_generator(&p)?, &rho0, &times)?;
    println!("{:>6} {:>12} {:>12} {:>10}", "t", "<N>", "oracle", "|a err|");
    for (t, rho) in times.iter().zip(&states) {
        let (a, n) = dho_moment_oracles(&p, alpha, alpha.norm_sqr(), *t)?;
        let a_num = rho.expect(&ops.a);
        println!("{t:6.2} {:12.8} {n:12.8} {:10.2e}", rho.expect(&ops.number).re, (a_num - a).norm());
    }
    println!("thermal occupation {:.6}", p.occupation()?);
    Ok(())
}
