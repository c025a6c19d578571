//! Two-level relaxation towards the Gibbs state at a few bath occupations.

use covdyn::lindblad::evolve_expm;
use covdyn::models::{two_level_generator, two_level_gibbs_state, two_level_oracles, Temperature, TwoLevelParams};
use covdyn::states::basis;
use covdyn::DensityMatrix;

fn main() -> covdyn::Result<()> {
    for nb in [0.0, 0.5, 2.0] {
        let p = TwoLevelParams::new(1.0, 0.3, Temperature::Occupation(nb));
        let space = p.space()?;
        let gen = two_level_generator(&p)?;
        let rho0 = DensityMatrix::pure(&space, &basis(&space, 1))?;
        let gibbs = two_level_gibbs_state(&p)?;
        println!("N = {nb}: total rate {:.4}", p.total_rate()?);
        for t in [0.0, 1.0, 5.0, 20.0] {
            let rho = evolve_expm(&gen, &rho0, t)?;
            let (excited, _) = two_level_oracles(&p, &rho0, t)?;
            println!("  t = {t:5.1}  p1 = {:.12}  oracle {excited:.12}", rho.population(1));
        }
        println!("  stationary residual {:.2e}", gen.apply(gibbs.op()).trace_norm()?);
    }
    Ok(())
}
