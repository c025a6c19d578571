use super::{curve_rows, linspace, max_of, CURVE_HEADER};
use crate::error::Result;
use crate::lindblad::{evolve_expm_times, evolve_ode};
use crate::models::{qbm_exact_solution, qbm_four_term, qbm_generator, qbm_moment_oracles, QBMParams};
use crate::operator::DensityMatrix;
use crate::runner::{csv, Criterion, ExperimentConfig, QbmSection, ScenarioOutcome};
use crate::space::{grid_ops, momentum_function, HilbertSpace};
use crate::states::gaussian_packet;
use crate::C64;

fn params(q: &QbmSection, points: usize) -> Result<QBMParams> {
    Ok(QBMParams::new(HilbertSpace::centered_grid(points, q.dx)?, q.mass, q.eta, q.beta))
}

/// Equal superposition of packets at `-sep/2` and `+sep/2`.
fn cat(space: &HilbertSpace, sep: f64, sigma: f64) -> Result<DensityMatrix> {
    let v = &gaussian_packet(space, -sep / 2.0, 0.0, sigma)? + &gaussian_packet(space, sep / 2.0, 0.0, sigma)?;
    let n: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    DensityMatrix::pure(space, &v.mapv(|z| z / n.sqrt()))
}

pub(super) fn qbm_exact(c: &ExperimentConfig) -> Result<ScenarioOutcome> {
    let q = &c.qbm;
    let mut out = ScenarioOutcome::default();

    let small = params(q, q.superop_points)?;
    let mut form: f64 = 0.0;
    for p in [small, small.frictionless()] {
        let diff = &qbm_generator(&p)?.superop() - &qbm_four_term(&p)?.superop();
        form = form.max(diff.max_abs());
    }
    out.check(Criterion::at_most("lindblad_vs_four_term_max_abs_difference", form, 1e-12));

    let p = params(q, q.points)?.frictionless();
    let gen = qbm_generator(&p)?;
    let rho0 = cat(&p.space, q.cat_separation, q.cat_sigma)?;
    let grid = p.space.grid()?;
    let cell = |x: f64| ((x - grid.x_min) / grid.dx).round() as usize;
    let (i, j) = (cell(-q.cat_separation / 2.0), cell(q.cat_separation / 2.0));
    let mut worst: f64 = 0.0;
    let (mut analytic, mut numeric, mut dist) = (Vec::new(), Vec::new(), Vec::new());
    for &t in &q.exact_times {
        let ex = qbm_exact_solution(&p.space, &p.diffusion(), rho0.op(), t)?;
        let ode = evolve_ode(&gen, &rho0, t, c.numerics.ode_rel_tol)?;
        let d = (&ex - ode.op()).trace_norm()?;
        worst = worst.max(d);
        dist.push(vec![t, d]);
        analytic.push(ex.matrix()[[i, j]].norm());
        numeric.push(ode.matrix()[[i, j]].norm());
    }
    out.check(Criterion::at_most("exact_vs_ode_trace_norm", worst, 1e-4));
    out.note("cat_coherence_max_abs_error", max_of(analytic.iter().zip(&numeric).map(|(a, b)| (a - b).abs())));
    out.file("exact_vs_ode.csv", csv(&["t", "trace_norm_difference"], &dist));
    out.file("cat_coherence.csv", csv(&CURVE_HEADER, &curve_rows(&q.exact_times, &analytic, &numeric)));
    Ok(out)
}

/// Least-squares slope of `ln y` against `t`.
pub(crate) fn log_slope(ts: &[f64], ys: &[f64]) -> f64 {
    let n = ts.len() as f64;
    let ls: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mt = ts.iter().sum::<f64>() / n;
    let ml = ls.iter().sum::<f64>() / n;
    let num: f64 = ts.iter().zip(&ls).map(|(t, l)| (t - mt) * (l - ml)).sum();
    let den: f64 = ts.iter().map(|t| (t - mt).powi(2)).sum();
    num / den
}

pub(super) fn qbm_moments(c: &ExperimentConfig) -> Result<ScenarioOutcome> {
    let q = &c.qbm;
    let p = params(q, q.points)?;
    let gen = qbm_generator(&p)?;
    let psi = gaussian_packet(&p.space, 0.0, q.packet_p0, q.packet_sigma)?;
    let rho0 = DensityMatrix::pure(&p.space, &psi)?;
    let ops = grid_ops(&p.space)?;
    let energy = momentum_function(&p.space, |k| C64::new(k * k / (2.0 * p.mass), 0.0))?;
    let ts = linspace(q.moment_t_max, q.moment_samples);
    let states = evolve_expm_times(&gen, &rho0, &ts)?;
    let (mut pa, mut pn, mut ea, mut en) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (&t, rho) in ts.iter().zip(&states) {
        let (p_t, e_t) = qbm_moment_oracles(&p, &rho0, t)?;
        pa.push(p_t);
        ea.push(e_t);
        pn.push(rho.expect(&ops.p_hat).re);
        en.push(rho.expect(&energy).re);
    }
    let fitted = -log_slope(&ts, &pn);
    let mut out = ScenarioOutcome::default();
    out.check(Criterion::at_most("momentum_decay_rate_rel_error", (fitted - p.eta).abs() / p.eta, 0.01));
    out.note("fitted_decay_rate", fitted);
    out.note("momentum_max_abs_error", max_of(pa.iter().zip(&pn).map(|(a, b)| (a - b).abs())));
    out.note("energy_max_abs_error", max_of(ea.iter().zip(&en).map(|(a, b)| (a - b).abs())));
    out.file("momentum_mean.csv", csv(&CURVE_HEADER, &curve_rows(&ts, &pa, &pn)));
    out.file("energy_mean.csv", csv(&CURVE_HEADER, &curve_rows(&ts, &ea, &en)));
    Ok(out)
}
