use super::rng;
use crate::covariance::{
    covariance_residual, generalized_weyl_residual, localized_samples, weyl_residual, Group, ResidualReport, UnitaryRep,
};
use crate::error::Result;
use crate::lindblad::LindbladGenerator;
use crate::models::{
    dho_generator, qbm_generator, qlbe_generator, rotation_covariant_generator, shift_covariant_generator,
    two_level_generator, DHOParams, QBMParams, QLBEParams, RotCovParams, ShiftCovParams, Temperature, TwoLevelParams,
};
use crate::operator::DensityMatrix;
use crate::runner::{Criterion, ExperimentConfig, ScenarioOutcome};
use crate::space::HilbertSpace;
use crate::superop::Superoperator;

const COVARIANCE_TOL: f64 = 1e-10;
const CHOI_TOL: f64 = 1e-9;

fn dho(c: &ExperimentConfig, dim: usize) -> DHOParams {
    DHOParams::new(c.dho.omega, c.dho.eta, Temperature::Beta(c.dho.beta), dim)
}

fn shift(c: &ExperimentConfig, dim: usize) -> ShiftCovParams {
    ShiftCovParams {
        eta_0: c.covariance.shift_eta_0,
        eta_m: c.covariance.shift_eta_m.clone(),
        omega: c.dho.omega,
        temperature: Temperature::Beta(c.dho.beta),
        dim,
        hbar: 1.0,
    }
}

fn rotation(c: &ExperimentConfig) -> RotCovParams {
    let r = &c.rotation;
    RotCovParams::new(r.c_minus, r.c_zero, r.c_plus, r.h)
}

fn qbm(c: &ExperimentConfig, points: usize) -> Result<QBMParams> {
    let q = &c.qbm;
    Ok(QBMParams::new(HilbertSpace::centered_grid(points, q.dx)?, q.mass, q.eta, q.beta))
}

fn qlbe(c: &ExperimentConfig, points: usize) -> Result<LindbladGenerator> {
    let q = &c.qlbe;
    let space = HilbertSpace::centered_grid(points, q.dx)?;
    let cells: Vec<i64> = q.transfers.iter().map(|&m| m as i64).collect();
    let p = QLBEParams::contact(space, q.test_mass, q.gas_mass, q.beta, q.density, &cells, q.amplitude)?;
    Ok(qlbe_generator(&p)?.generator)
}

fn two_levels(c: &ExperimentConfig) -> Result<Vec<(f64, LindbladGenerator)>> {
    let t = &c.two_level;
    t.occupations
        .iter()
        .map(|&nb| Ok((nb, two_level_generator(&TwoLevelParams::new(t.omega, t.eta, Temperature::Occupation(nb)))?)))
        .collect()
}

pub(super) fn covariance_audit(c: &ExperimentConfig) -> Result<ScenarioOutcome> {
    let v = &c.covariance;
    let mut rng = rng(c);
    let mut out = ScenarioOutcome::default();
    let mut rows: Vec<ResidualReport> = Vec::new();

    let mut audit = |model: &str, gen: &LindbladGenerator, group: Group, params: &[f64], samples: &[DensityMatrix]| -> Result<()> {
        let rep = UnitaryRep::new(group, gen.space())?;
        for &g in params {
            let res = covariance_residual(gen, &rep, &[g], samples)?;
            let name = format!("{model}/{}", serde_json::to_value(group)?.as_str().unwrap_or("group"));
            rows.push(ResidualReport::new(name, vec![g], res, COVARIANCE_TOL));
        }
        Ok(())
    };

    let fock = HilbertSpace::fock(v.fock_dim)?;
    let fock_samples: Vec<_> = (0..v.samples).map(|_| DensityMatrix::random(&fock, &mut rng)).collect();
    audit("dho", &dho_generator(&dho(c, v.fock_dim))?, Group::U1Phase, &v.phases, &fock_samples)?;
    audit("shift_covariant", &shift_covariant_generator(&shift(c, v.fock_dim))?, Group::U1Phase, &v.phases, &fock_samples)?;

    let qubit = HilbertSpace::qubit();
    let qubit_samples: Vec<_> = (0..v.samples).map(|_| DensityMatrix::random(&qubit, &mut rng)).collect();
    for (nb, gen) in two_levels(c)? {
        audit(&format!("two_level(n={nb})"), &gen, Group::So2Spin, &v.phases, &qubit_samples)?;
    }
    audit("rotation_covariant", &rotation_covariant_generator(&rotation(c))?, Group::So2Spin, &v.phases, &qubit_samples)?;

    let q = qbm(c, c.qbm.points)?;
    let shifts: Vec<f64> = v.shifts.iter().map(|&k| k as f64 * c.qbm.dx).collect();
    let grid_samples = localized_samples(&q.space, v.samples, v.sample_sigma, v.sample_spread, v.sample_p_max, &mut rng)?;
    audit("qbm", &qbm_generator(&q)?, Group::Translation1d, &shifts, &grid_samples)?;
    audit("qbm_frictionless", &qbm_generator(&q.frictionless())?, Group::Translation1d, &shifts, &grid_samples)?;

    let lb = qlbe(c, c.qlbe.points)?;
    let lb_samples = localized_samples(lb.space(), v.samples, v.sample_sigma, v.sample_spread, v.sample_p_max, &mut rng)?;
    let lb_shifts: Vec<f64> = v.shifts.iter().map(|&k| k as f64 * c.qlbe.dx).collect();
    audit("qlbe", &lb, Group::Translation1d, &lb_shifts, &lb_samples)?;

    let model_max = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    out.check(Criterion::at_most("model_covariance_max_residual", model_max, COVARIANCE_TOL));

    let ws = HilbertSpace::centered_grid(v.weyl_points, 1.0)?;
    let wg = ws.grid()?;
    let (a, qv) = (v.weyl_a_cells as f64 * wg.dx, v.weyl_q_cells as f64 * wg.dp());
    let w = weyl_residual(&ws, a, qv)?;
    rows.push(ResidualReport::new("weyl", vec![a, qv], w.residual, COVARIANCE_TOL));
    out.check(Criterion::at_most("weyl_residual", w.residual, COVARIANCE_TOL));
    let off = weyl_residual(&ws, 0.5 * wg.dx, qv)?;
    out.note("weyl_residual_off_lattice_half_cell", off.residual);

    let fs = HilbertSpace::fock(v.weyl_dim)?;
    let mut gw: f64 = 0.0;
    for &m in &v.weyl_powers {
        let r = generalized_weyl_residual(&fs, v.weyl_theta, m)?;
        rows.push(ResidualReport::new("generalized_weyl", vec![v.weyl_theta, m as f64], r, COVARIANCE_TOL));
        gw = gw.max(r);
    }
    out.check(Criterion::at_most("generalized_weyl_residual", gw, COVARIANCE_TOL));

    // complete positivity of exp(t L) on the smallest instances
    let mut models: Vec<(String, LindbladGenerator)> = vec![
        ("dho".into(), dho_generator(&dho(c, v.choi_fock_dim))?),
        ("shift_covariant".into(), shift_covariant_generator(&shift(c, v.choi_fock_dim))?),
        ("rotation_covariant".into(), rotation_covariant_generator(&rotation(c))?),
    ];
    for (nb, gen) in two_levels(c)? {
        models.push((format!("two_level(n={nb})"), gen));
    }
    let sq = qbm(c, v.choi_grid_points)?;
    models.push(("qbm".into(), qbm_generator(&sq)?));
    models.push(("qbm_frictionless".into(), qbm_generator(&sq.frictionless())?));
    models.push(("qlbe".into(), qlbe(c, v.choi_grid_points)?));
    let mut choi = f64::INFINITY;
    for (name, gen) in &models {
        let l = gen.superop();
        for &t in &v.choi_times {
            let m = l.exp(t)?.choi_min_eigenvalue()?;
            rows.push(ResidualReport::new(format!("choi/{name}"), vec![t], -m, CHOI_TOL));
            choi = choi.min(m);
        }
    }
    out.check(Criterion::at_least("choi_min_eigenvalue", choi, -CHOI_TOL));
    let control = Superoperator::transpose_map(&qubit).choi_min_eigenvalue()?;
    out.check(Criterion::at_most("transpose_control_min_eigenvalue", control, -CHOI_TOL));

    out.residuals = rows;
    Ok(out)
}
