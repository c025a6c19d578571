//! Monte Carlo wave-function unraveling of qubit decay, compared with the
//! master equation.

use covdyn::lindblad::{evolve_expm, mean_and_error, unravel_jumps, JumpConfig};
use covdyn::models::{two_level_generator, Temperature, TwoLevelParams};
use covdyn::space::pauli_ops;
use covdyn::{DensityMatrix, C64};
use ndarray::Array1;

fn main() -> covdyn::Result<()> {
    let p = TwoLevelParams::new(1.0, 1.0, Temperature::Zero);
    let space = p.space()?;
    let gen = two_level_generator(&p)?;
    let pauli = pauli_ops(&space)?;
    let psi = Array1::from(vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)]);
    let exact = evolve_expm(&gen, &DensityMatrix::pure(&space, &psi)?, 1.5)?;

    for n in [100, 1000, 10000] {
        let run = unravel_jumps(&gen, &psi, 1.5, &JumpConfig::new(n, 7, 0.05))?;
        let (m, se) = run.observable(&pauli.sigma_z);
        let (tj, _) = mean_and_error(&run.first_jump_times());
        println!(
            "n = {n:5}  <sz> = {m:+.4} +- {se:.4}  exact {:+.4}  mean first jump {tj:.3}",
            exact.expect(&pauli.sigma_z).re
        );
    }
    Ok(())
}
