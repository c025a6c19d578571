//! Interference term of a two-component cat under amplitude damping.

use covdyn::lindblad::evolve_expm;
use covdyn::models::{cat_coherence_numeric, cat_state, dho_cat_coherence, dho_generator, DHOParams, Temperature};
use covdyn::C64;

fn main() -> covdyn::Result<()> {
    let eta = 0.1;
    let p = DHOParams::new(1.0, eta, Temperature::Zero, 40);
    let space = p.space()?;
    let gen = dho_generator(&p)?;
    let alpha = C64::new(2.0, 0.0);
    let (rho0, _) = cat_state(&space, alpha, -alpha)?;
    for eta_t in [0.0, 0.05, 0.1, 0.2, 0.5] {
        let t = eta_t / eta;
        let rho = evolve_expm(&gen, &rho0, t)?;
        // both components decay to alpha e^{-(i omega + eta/2) t}
        let a = p.damped_amplitude(alpha, t);
        let c = cat_coherence_numeric(&rho, a, -a)?;
        println!("eta t = {eta_t:4.2}  |c| = {:.10}  analytic {:.10}", c.norm(), dho_cat_coherence(alpha, -alpha, eta, t));
    }
    Ok(())
}
