//! Effects, POVMs and instruments on finite outcome spaces.

mod instrument;
mod povm;
mod region;

pub use instrument::{
    apply_instrument, joint_xp_instrument, kraus_instrument, von_neumann_instrument, Instrument, InstrumentLog,
    InstrumentOutcome,
};
pub use povm::{
    delta_weights, effect_bounds, gaussian_weights, joint_xp_povm, offset_moments, projective_povm,
    smeared_momentum_povm, smeared_position_povm, Axis, Povm, SeedState,
};
pub use region::Region;

use crate::error::Result;
use crate::operator::DensityMatrix;

/// `Tr(rho F(M))`; may stray outside `[0, 1]` by rounding.
pub fn outcome_probability(rho: &DensityMatrix, povm: &Povm, region: &Region) -> Result<f64> {
    povm.probability(rho, region)
}

/// CSV with columns `region_id,probability`, probabilities clipped to
/// `[0, 1]` and written with 17 significant digits.
pub fn outcome_csv(rows: &[(String, f64)]) -> String {
    let mut out = String::from("region_id,probability\n");
    for (id, p) in rows {
        out.push_str(&format!("{},{:.16e}\n", id, p.clamp(0.0, 1.0)));
    }
    out
}
