use rand::Rng;

use super::{curve_rows, linspace, max_of, rng, CURVE_HEADER};
use crate::covariance::{covariance_residual, Group, ResidualReport, UnitaryRep};
use crate::error::Result;
use crate::lindblad::{evolve_expm, evolve_expm_times};
use crate::models::{
    rotation_covariant_explicit, rotation_covariant_generator, two_level_generator, two_level_oracles, RotCovParams,
    Temperature, TwoLevelParams,
};
use crate::operator::DensityMatrix;
use crate::runner::{csv, Criterion, ExperimentConfig, ScenarioOutcome};
use crate::space::HilbertSpace;

pub(super) fn two_level(c: &ExperimentConfig) -> Result<ScenarioOutcome> {
    let d = &c.two_level;
    let mut rng = rng(c);
    let (mut pe_err, mut c_err, mut asym_err, mut rate_err): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    let mut out = ScenarioOutcome::default();
    for &nb in &d.occupations {
        let p = TwoLevelParams::new(d.omega, d.eta, Temperature::Occupation(nb));
        let gen = two_level_generator(&p)?;
        let s = p.space()?;
        let rate = p.total_rate()?;
        for _ in 0..d.random_states {
            let rho0 = DensityMatrix::random(&s, &mut rng);
            let t = rng.random_range(0.0..d.max_rate_time / rate);
            let rho = evolve_expm(&gen, &rho0, t)?;
            let (pe, coh) = two_level_oracles(&p, &rho0, t)?;
            pe_err = pe_err.max((rho.population(1) - pe).abs());
            c_err = c_err.max((rho.matrix()[[1, 0]].norm() - coh.norm()).abs());
        }
        // excited start: the relaxation rate from one decay time, and the asymptote
        let excited = DensityMatrix::pure(&s, &crate::states::basis(&s, 1))?;
        let p_inf = nb / (2.0 * nb + 1.0);
        let t1 = 1.0 / rate;
        let rho1 = evolve_expm(&gen, &excited, t1)?;
        let fitted = -((rho1.population(1) - p_inf) / (1.0 - p_inf)).ln() / t1;
        rate_err = rate_err.max((fitted - rate).abs());
        let late = evolve_expm(&gen, &excited, 40.0 / rate)?;
        asym_err = asym_err.max((late.population(1) - p_inf).abs());

        let ts = linspace(d.max_rate_time / rate, 25);
        let states = evolve_expm_times(&gen, &excited, &ts)?;
        let analytic: Vec<f64> = ts.iter().map(|&t| two_level_oracles(&p, &excited, t).map(|x| x.0)).collect::<Result<_>>()?;
        let numeric: Vec<f64> = states.iter().map(|r| r.population(1)).collect();
        out.file(format!("excited_population_n{nb}.csv"), csv(&CURVE_HEADER, &curve_rows(&ts, &analytic, &numeric)));
    }
    out.check(Criterion::at_most("excited_population_max_abs_error", pe_err, 1e-12));
    out.check(Criterion::at_most("coherence_modulus_max_abs_error", c_err, 1e-12));
    out.check(Criterion::at_most("relaxation_rate_abs_error", rate_err, 1e-12));
    out.check(Criterion::at_most("asymptote_abs_error", asym_err, 1e-12));
    Ok(out)
}

pub(super) fn rotation_covariant(c: &ExperimentConfig) -> Result<ScenarioOutcome> {
    let r = &c.rotation;
    let p = RotCovParams::new(r.c_minus, r.c_zero, r.c_plus, r.h);
    let gen = rotation_covariant_generator(&p)?;
    let explicit = rotation_covariant_explicit(&p)?;
    let form_err = (&gen.superop() - &explicit).max_abs();

    // c_-1 = eta (N + 1) / 2, c_1 = eta N / 2, h = omega / 2 gives the two-level atom
    let d = &c.two_level;
    let mut reduction: f64 = 0.0;
    for &nb in &d.occupations {
        let rc = RotCovParams::new(d.eta * (nb + 1.0) / 2.0, 0.0, d.eta * nb / 2.0, d.omega / 2.0);
        let tl = TwoLevelParams::new(d.omega, d.eta, Temperature::Occupation(nb));
        let diff = &rotation_covariant_generator(&rc)?.superop() - &two_level_generator(&tl)?.superop();
        reduction = reduction.max(diff.max_abs());
    }

    // pure dephasing: coherences decay at 2 c_0, populations frozen
    let s = HilbertSpace::qubit();
    let mut rng = rng(c);
    let rho0 = DensityMatrix::random(&s, &mut rng);
    let deph = rotation_covariant_generator(&RotCovParams::new(0.0, r.c_zero, 0.0, 0.0))?;
    let ts = linspace(3.0 / (2.0 * r.c_zero.max(1e-3)), 25);
    let states = evolve_expm_times(&deph, &rho0, &ts)?;
    let c0 = rho0.matrix()[[0, 1]].norm();
    let analytic: Vec<f64> = ts.iter().map(|t| c0 * (-2.0 * r.c_zero * t).exp()).collect();
    let numeric: Vec<f64> = states.iter().map(|x| x.matrix()[[0, 1]].norm()).collect();
    let deph_err = max_of(analytic.iter().zip(&numeric).map(|(a, b)| (a - b).abs()));
    let pop_drift = max_of(states.iter().map(|x| (x.population(1) - rho0.population(1)).abs()));

    let rep = UnitaryRep::new(Group::So2Spin, &s)?;
    let samples: Vec<_> = (0..c.covariance.samples).map(|_| DensityMatrix::random(&s, &mut rng)).collect();
    let mut out = ScenarioOutcome::default();
    let mut cov: f64 = 0.0;
    for &th in &r.angles {
        let res = covariance_residual(&gen, &rep, &[th], &samples)?;
        out.residuals.push(ResidualReport::new("rotation_covariant/so2", vec![th], res, 1e-12));
        cov = cov.max(res);
    }
    out.check(Criterion::at_most("pauli_form_max_abs_difference", form_err, 1e-14));
    out.check(Criterion::at_most("two_level_reduction_max_abs_difference", reduction, 1e-14));
    out.check(Criterion::at_most("dephasing_max_abs_error", deph_err, 1e-13));
    out.check(Criterion::at_most("dephasing_population_drift", pop_drift, 1e-13));
    out.check(Criterion::at_most("so2_covariance_residual", cov, 1e-12));
    out.file("dephasing.csv", csv(&CURVE_HEADER, &curve_rows(&ts, &analytic, &numeric)));
    Ok(out)
}
