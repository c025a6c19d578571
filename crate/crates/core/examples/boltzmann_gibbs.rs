//! Quantum linear Boltzmann generator on a momentum lattice: the thermal
//! momentum distribution is stationary up to the weight lost at the edges.

use covdyn::models::{momentum_gibbs_state, population_rate_matrix, qlbe_generator, QLBEParams};
use covdyn::HilbertSpace;

fn main() -> covdyn::Result<()> {
    let space = HilbertSpace::centered_grid(32, 1.0)?;
    let (mass, beta) = (1.0, 4.0);
    let params = QLBEParams::contact(space, mass, 2.0, beta, 0.5, &[-2, -1, 1, 2], 0.3)?;
    let model = qlbe_generator(&params)?;
    let gibbs = momentum_gibbs_state(&space, mass, beta)?;
    println!("stationarity residual {:.3e}", model.generator.apply(gibbs.op()).trace_norm()?);
    println!("dropped weight        {:.3e}", model.dropped_weight);

    let rates = population_rate_matrix(&model.generator)?;
    let worst = (0..rates.ncols()).map(|b| rates.column(b).sum().abs()).fold(0.0, f64::max);
    println!("largest column sum    {worst:.3e}");
    Ok(())
}
