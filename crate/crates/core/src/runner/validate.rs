//! Field-level checks of a resolved configuration. Nothing here evolves a
//! state or forms a superoperator.

use std::fmt;

use serde::Serialize;

use super::ExperimentConfig;
use crate::error::Error;
use crate::models::{DHOParams, QBMParams, QLBEParams, RotCovParams, ShiftCovParams, Temperature, TwoLevelParams};
use crate::space::HilbertSpace;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub field: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

struct Checker {
    out: Vec<Diagnostic>,
}

impl Checker {
    fn push(&mut self, field: impl Into<String>, message: impl Into<String>) {
        self.out.push(Diagnostic {
            field: field.into(),
            message: message.into(),
        });
    }

    /// Record a model error under `section`, using the field the error names
    /// when it has one.
    fn model(&mut self, section: &str, fallback: &str, r: crate::Result<()>) {
        let Err(e) = r else { return };
        let field = match &e {
            Error::InvalidParameter { field, .. } => format!("{section}.{field}"),
            _ => format!("{section}.{fallback}"),
        };
        self.push(field, e.to_string());
    }

    fn positive(&mut self, field: &str, v: f64) {
        if !(v > 0.0 && v.is_finite()) {
            self.push(field, format!("must be positive, got {v}"));
        }
    }

    fn nonnegative(&mut self, field: &str, v: f64) {
        if !(v >= 0.0 && v.is_finite()) {
            self.push(field, format!("must be nonnegative, got {v}"));
        }
    }

    fn at_least(&mut self, field: &str, v: usize, min: usize) {
        if v < min {
            self.push(field, format!("must be at least {min}, got {v}"));
        }
    }

    fn grid(&mut self, field: &str, points: usize, dx: f64) -> Option<HilbertSpace> {
        match HilbertSpace::centered_grid(points, dx) {
            Ok(s) if points % 2 == 0 => Some(s),
            Ok(_) => {
                self.push(field, format!("grid needs an even number of points, got {points}"));
                None
            }
            Err(e) => {
                self.push(field, e.to_string());
                None
            }
        }
    }
}

pub fn validate(c: &ExperimentConfig) -> Vec<Diagnostic> {
    let mut k = Checker { out: Vec::new() };
    k.at_least("workers", c.workers, 1);

    let n = &c.numerics;
    if !(n.ode_rel_tol > 1e-14 && n.ode_rel_tol < 1e-3) {
        k.push("numerics.ode_rel_tol", format!("must lie in (1e-14, 1e-3), got {}", n.ode_rel_tol));
    }
    k.positive("numerics.leakage_limit", n.leakage_limit);

    let d = &c.dho;
    k.model("dho", "beta", DHOParams::new(d.omega, d.eta, Temperature::Beta(d.beta), d.dim).validate());
    k.at_least("dho.samples", d.samples, 2);

    let d = &c.dho_cat;
    k.model("dho_cat", "dim", DHOParams::new(d.omega, d.eta, Temperature::Zero, d.dim).validate());
    for a in &d.amplitudes {
        k.positive("dho_cat.amplitudes", *a);
    }
    for t in &d.eta_t {
        k.nonnegative("dho_cat.eta_t", *t);
    }

    let d = &c.two_level;
    for &occ in &d.occupations {
        k.model("two_level", "occupations", TwoLevelParams::new(d.omega, d.eta, Temperature::Occupation(occ)).validate());
    }
    k.at_least("two_level.random_states", d.random_states, 1);
    k.positive("two_level.max_rate_time", d.max_rate_time);

    let r = &c.rotation;
    k.model("rotation", "h", RotCovParams::new(r.c_minus, r.c_zero, r.c_plus, r.h).validate());

    let q = &c.qbm;
    for (field, pts) in [("qbm.points", q.points), ("qbm.superop_points", q.superop_points)] {
        if let Some(s) = k.grid(field, pts, q.dx) {
            k.model("qbm", "beta", QBMParams::new(s, q.mass, q.eta, q.beta).validate());
        }
    }
    k.positive("qbm.cat_sigma", q.cat_sigma);
    k.positive("qbm.packet_sigma", q.packet_sigma);
    k.nonnegative("qbm.cat_separation", q.cat_separation);
    for t in &q.exact_times {
        k.nonnegative("qbm.exact_times", *t);
    }
    k.at_least("qbm.moment_samples", q.moment_samples, 3);
    k.positive("qbm.moment_t_max", q.moment_t_max);

    let q = &c.qlbe;
    let mut cells = Vec::new();
    for &m in &q.transfers {
        if m == 0.0 {
            k.push("qlbe.transfers", Error::ZeroMomentumTransfer.to_string());
        } else if m.fract() != 0.0 || !m.is_finite() {
            k.push(
                "qlbe.transfers",
                format!("off-lattice momentum transfer: {m} is not an integer multiple of dp"),
            );
        } else {
            cells.push(m as i64);
        }
    }
    k.at_least("qlbe.random_states", q.random_states, 1);
    if let Some(s) = k.grid("qlbe.points", q.points, q.dx) {
        match QLBEParams::contact(s, q.test_mass, q.gas_mass, q.beta, q.density, &cells, q.amplitude) {
            Ok(p) => k.model("qlbe", "transfers", p.validate().map(|_| ())),
            Err(e) => k.push("qlbe", e.to_string()),
        }
    }

    let p = &c.povm;
    k.grid("povm.points", p.points, p.dx);
    k.positive("povm.sigma", p.sigma);
    k.positive("povm.frame_tolerance", p.frame_tolerance);
    if p.rect_half_width < 0 || 2 * p.rect_half_width + 1 > p.points as i64 {
        k.push("povm.rect_half_width", format!("must lie in [0, points/2), got {}", p.rect_half_width));
    }

    let i = &c.instrument;
    k.grid("instrument.points", i.points, i.dx);
    k.positive("instrument.sigma", i.sigma);
    k.at_least("instrument.random_states", i.random_states, 1);

    let l = &c.levy;
    k.grid("levy.points", l.points, l.dx);
    for t in &l.times {
        k.nonnegative("levy.times", *t);
    }
    k.nonnegative("levy.d_pp", l.d_pp);
    k.nonnegative("levy.equivalence_time", l.equivalence_time);
    k.positive("levy.packet_sigma", l.packet_sigma);
    if l.triplets.is_empty() {
        k.push("levy.triplets", "at least one triplet is required");
    }
    for (idx, t) in l.triplets.iter().enumerate() {
        k.model(&format!("levy.triplets[{idx}]"), "d", t.triplet.validate());
    }

    let v = &c.covariance;
    k.at_least("covariance.fock_dim", v.fock_dim, 2);
    k.at_least("covariance.samples", v.samples, 1);
    k.at_least("covariance.choi_fock_dim", v.choi_fock_dim, 5);
    if let Some(s) = k.grid("covariance.choi_grid_points", v.choi_grid_points, c.qbm.dx) {
        k.model("covariance", "choi_grid_points", QBMParams::new(s, c.qbm.mass, c.qbm.eta, c.qbm.beta).validate());
    }
    for t in &v.choi_times {
        k.nonnegative("covariance.choi_times", *t);
    }
    k.grid("covariance.weyl_points", v.weyl_points, 1.0);
    for &m in &v.weyl_powers {
        if m == 0 || 2 * m >= v.weyl_dim {
            k.push(
                "covariance.weyl_powers",
                Error::TruncationTooSmall(format!("power {m} needs weyl_dim > {}", 2 * m)).to_string(),
            );
        }
    }
    let shift = ShiftCovParams {
        eta_0: v.shift_eta_0,
        eta_m: v.shift_eta_m.clone(),
        omega: c.dho.omega,
        temperature: Temperature::Beta(c.dho.beta),
        dim: v.choi_fock_dim,
        hbar: 1.0,
    };
    k.model("covariance", "shift", shift.validate());
    k.model("covariance", "shift", ShiftCovParams { dim: v.fock_dim, ..shift }.validate());
    k.positive("covariance.sample_sigma", v.sample_sigma);
    k.nonnegative("covariance.sample_spread", v.sample_spread);
    k.nonnegative("covariance.sample_p_max", v.sample_p_max);

    let j = &c.jumps;
    k.at_least("jumps.trajectories", j.trajectories, 2);
    k.positive("jumps.dt_max", j.dt_max);
    k.at_least("jumps.sweep_start", j.sweep_start, 2);
    if j.sweep_doublings < 1 {
        k.push("jumps.sweep_doublings", "must be at least 1");
    }
    k.at_least("jumps.replicates", j.replicates, 2);
    k.model("jumps", "qubit_eta", TwoLevelParams::new(j.qubit_omega, j.qubit_eta, Temperature::Zero).validate());
    k.model("jumps", "dho_eta", DHOParams::new(j.dho_omega, j.dho_eta, Temperature::Zero, j.dho_dim).validate());
    k.positive("jumps.qubit_time", j.qubit_time);
    k.positive("jumps.dho_time", j.dho_time);
    if j.dho_levels.is_empty() {
        k.push("jumps.dho_levels", "needs at least one Fock level");
    } else if let Some(&l) = j.dho_levels.iter().find(|&&l| l >= j.dho_dim) {
        k.push("jumps.dho_levels", format!("level {l} outside the truncation dim {}", j.dho_dim));
    } else if j.dho_levels.iter().collect::<std::collections::BTreeSet<_>>().len() != j.dho_levels.len() {
        k.push("jumps.dho_levels", "levels must be distinct");
    }

    k.out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        assert!(validate(&ExperimentConfig::defaults()).is_empty());
    }

    #[test]
    fn negative_eta_named() {
        let c = ExperimentConfig::from_toml("[dho]\neta = -0.1\n").unwrap();
        let d = validate(&c);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].field, "dho.eta");
    }

    #[test]
    fn off_lattice_transfer_named() {
        let c = ExperimentConfig::from_toml("[qlbe]\ntransfers = [1.0, 1.5]\n").unwrap();
        let d = validate(&c);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].field, "qlbe.transfers");
        assert!(d[0].message.contains("off-lattice"));
    }
}
