//! Choi spectrum of model propagators, with the transpose map as the
//! control that must fail.

use covdyn::models::{dho_generator, two_level_generator, DHOParams, Temperature, TwoLevelParams};
use covdyn::{HilbertSpace, Superoperator};

fn main() -> covdyn::Result<()> {
    let dho = dho_generator(&DHOParams::new(1.0, 0.3, Temperature::Beta(1.0), 6))?.superop();
    let qubit = two_level_generator(&TwoLevelParams::new(1.0, 0.5, Temperature::Occupation(0.5)))?.superop();
    for t in [0.1, 1.0, 10.0] {
        println!(
            "t = {t:4.1}  dho {:+.2e}  qubit {:+.2e}",
            dho.exp(t)?.choi_min_eigenvalue()?,
            qubit.exp(t)?.choi_min_eigenvalue()?
        );
    }
    let transpose = Superoperator::transpose_map(&HilbertSpace::qubit());
    println!("transpose control {:+.3}", transpose.choi_min_eigenvalue()?);
    Ok(())
}
