use super::{curve_rows, linspace, max_of, CURVE_HEADER};
use crate::error::Result;
use crate::lindblad::evolve_expm_times;
use crate::models::{cat_coherence_numeric, cat_state, dho_cat_coherence, dho_generator, dho_moment_oracles, DHOParams, Temperature};
use crate::operator::DensityMatrix;
use crate::runner::{csv, Criterion, ExperimentConfig, ScenarioOutcome};
use crate::space::fock_ops;
use crate::states::{coherent_state, leakage};
use crate::C64;

/// Population counted as leakage: the top two Fock levels.
const EDGE_LEVELS: usize = 2;

pub(super) fn dho_moments(c: &ExperimentConfig) -> Result<ScenarioOutcome> {
    let d = &c.dho;
    let p = DHOParams::new(d.omega, d.eta, Temperature::Beta(d.beta), d.dim);
    let space = p.space()?;
    let gen = dho_generator(&p)?;
    let ops = fock_ops(&space)?;
    let (ket, lost) = coherent_state(&space, C64::new(d.alpha[0], d.alpha[1]))?;
    let rho0 = DensityMatrix::pure(&space, &ket)?;
    let a0 = rho0.expect(&ops.a);
    let n0 = rho0.expect(&ops.number).re;

    let ts = linspace(5.0 / d.eta, d.samples);
    let states = evolve_expm_times(&gen, &rho0, &ts)?;
    let mut cols: [(Vec<f64>, Vec<f64>); 3] = Default::default();
    let mut worst_leak = leakage(&rho0, EDGE_LEVELS);
    for (&t, rho) in ts.iter().zip(&states) {
        let (a_t, n_t) = dho_moment_oracles(&p, a0, n0, t)?;
        let a_num = rho.expect(&ops.a);
        let n_num = rho.expect(&ops.number).re;
        for (col, (x, y)) in cols.iter_mut().zip([(a_t.re, a_num.re), (a_t.im, a_num.im), (n_t, n_num)]) {
            col.0.push(x);
            col.1.push(y);
        }
        worst_leak = worst_leak.max(leakage(rho, EDGE_LEVELS));
    }
    let err = |k: usize| max_of(cols[k].0.iter().zip(&cols[k].1).map(|(x, y)| (x - y).abs()));
    let a_err = max_of(ts.iter().enumerate().map(|(i, _)| {
        C64::new(cols[0].0[i] - cols[0].1[i], cols[1].0[i] - cols[1].1[i]).norm()
    }));

    let mut out = ScenarioOutcome::default();
    out.check(Criterion::at_most("a_mean_max_abs_error", a_err, 1e-6));
    out.check(Criterion::at_most("n_mean_max_abs_error", err(2), 1e-6));
    out.check(Criterion::at_most("fock_leakage", worst_leak, c.numerics.leakage_limit));
    out.note("a_real_max_abs_error", err(0));
    out.note("a_imag_max_abs_error", err(1));
    out.note("initial_truncation_loss", lost);
    out.note("thermal_occupation", p.occupation()?);
    for (name, (an, nu)) in ["a_real.csv", "a_imag.csv", "number.csv"].into_iter().zip(&cols) {
        out.file(name, csv(&CURVE_HEADER, &curve_rows(&ts, an, nu)));
    }
    Ok(out)
}

pub(super) fn dho_cat(c: &ExperimentConfig) -> Result<ScenarioOutcome> {
    let d = &c.dho_cat;
    let p = DHOParams::new(d.omega, d.eta, Temperature::Zero, d.dim);
    let space = p.space()?;
    let gen = dho_generator(&p)?;
    let ts: Vec<f64> = d.eta_t.iter().map(|x| x / d.eta).collect();
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    let mut worst_loss: f64 = 0.0;
    for &amp in &d.amplitudes {
        let alpha = C64::new(amp, 0.0);
        let (rho0, loss) = cat_state(&space, alpha, -alpha)?;
        worst_loss = worst_loss.max(loss);
        let states = evolve_expm_times(&gen, &rho0, &ts)?;
        for (&t, rho) in ts.iter().zip(&states) {
            let (a_t, b_t) = (p.damped_amplitude(alpha, t), p.damped_amplitude(-alpha, t));
            let numeric = cat_coherence_numeric(rho, a_t, b_t)?;
            let analytic = dho_cat_coherence(alpha, -alpha, d.eta, t);
            let e = (numeric - analytic).norm();
            worst = worst.max(e);
            rows.push(vec![amp, t, analytic, numeric.re, e]);
        }
    }
    let mut out = ScenarioOutcome::default();
    out.check(Criterion::at_most("coherence_max_abs_error", worst, 1e-4));
    out.check(Criterion::at_most("fock_leakage", worst_loss, c.numerics.leakage_limit));
    out.file("cat_coherence.csv", csv(&["amplitude", "t", "analytic", "numeric", "abs_error"], &rows));
    Ok(out)
}
