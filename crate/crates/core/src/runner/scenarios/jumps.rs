use ndarray::Array1;

use super::brownian::log_slope;
use crate::error::Result;
use crate::lindblad::{evolve_expm, mean_and_error, unravel_jumps, JumpConfig};
use crate::models::{dho_generator, two_level_generator, DHOParams, Temperature, TwoLevelParams};
use crate::operator::DensityMatrix;
use crate::runner::{csv, Criterion, ExperimentConfig, ScenarioOutcome};
use crate::space::{fock_ops, pauli_ops};
use crate::states::basis;
use crate::C64;

const STANDARD_ERRORS: f64 = 3.0;

/// `|mean - exact|` in units of the standard error.
fn z_score(mean: f64, se: f64, exact: f64) -> f64 {
    (mean - exact).abs() / se
}

pub(super) fn jump_convergence(c: &ExperimentConfig) -> Result<ScenarioOutcome> {
    let j = &c.jumps;
    let mut out = ScenarioOutcome::default();

    let qp = TwoLevelParams::new(j.qubit_omega, j.qubit_eta, Temperature::Zero);
    let qgen = two_level_generator(&qp)?;
    let qs = qp.space()?;
    let pauli = pauli_ops(&qs)?;
    let amp = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let psi_q = Array1::from(vec![amp, amp]);
    let rho_q = evolve_expm(&qgen, &DensityMatrix::pure(&qs, &psi_q)?, j.qubit_time)?;

    let cfg = JumpConfig::new(j.trajectories, c.seed, j.dt_max);
    let run = unravel_jumps(&qgen, &psi_q, j.qubit_time, &cfg)?;
    let mut worst_z: f64 = 0.0;
    for (name, op) in [("sigma_z", &pauli.sigma_z), ("sigma_x", &pauli.sigma_x)] {
        let (m, se) = run.observable(op);
        let z = z_score(m, se, rho_q.expect(op).re);
        out.note(format!("qubit_{name}_z"), z);
        worst_z = worst_z.max(z);
    }
    out.check(Criterion::at_most("qubit_max_standard_errors", worst_z, STANDARD_ERRORS));

    // at zero temperature the single jump time is exponential, truncated at t
    let firsts = run.first_jump_times();
    let (m, se) = mean_and_error(&firsts);
    let (eta, t) = (j.qubit_eta, j.qubit_time);
    let want = 1.0 / eta - t * (-eta * t).exp() / (1.0 - (-eta * t).exp());
    out.check(Criterion::at_most("first_jump_mean_standard_errors", z_score(m, se, want), STANDARD_ERRORS));
    let td = run.rho.trace_distance(&rho_q)?;
    out.check(Criterion::at_most("qubit_trace_distance_sqrt_n", td * (j.trajectories as f64).sqrt(), 4.0));

    let dp = DHOParams::new(j.dho_omega, j.dho_eta, Temperature::Zero, j.dho_dim);
    let dgen = dho_generator(&dp)?;
    let ds = dp.space()?;
    let fock = fock_ops(&ds)?;
    let w = C64::new(1.0 / (j.dho_levels.len() as f64).sqrt(), 0.0);
    let psi_d = j.dho_levels.iter().fold(Array1::zeros(ds.dim()), |acc, &l| acc + basis(&ds, l).mapv(|z| z * w));
    let rho_d = evolve_expm(&dgen, &DensityMatrix::pure(&ds, &psi_d)?, j.dho_time)?;
    let drun = unravel_jumps(&dgen, &psi_d, j.dho_time, &cfg)?;
    let quad_x = &fock.a + &fock.a_dagger;
    let quad_p = (&fock.a - &fock.a_dagger).scale(C64::new(0.0, -1.0));
    let mut worst_d: f64 = 0.0;
    for (name, op) in [("number", &fock.number), ("quadrature_x", &quad_x), ("quadrature_p", &quad_p)] {
        let (m, se) = drun.observable(op);
        let z = z_score(m, se, rho_d.expect(op).re);
        out.note(format!("dho_{name}_z"), z);
        worst_d = worst_d.max(z);
    }
    out.check(Criterion::at_most("dho_max_standard_errors", worst_d, STANDARD_ERRORS));

    let exact_z = rho_q.expect(&pauli.sigma_z).re;
    let mut rows = Vec::new();
    let (mut lns, mut lne) = (Vec::new(), Vec::new());
    for k in 0..=j.sweep_doublings {
        let n = j.sweep_start << k;
        let mut sq = 0.0;
        for r in 0..j.replicates {
            let seed = c.seed ^ ((r as u64 + 1) << 40) ^ ((k as u64 + 1) << 52);
            let res = unravel_jumps(&qgen, &psi_q, j.qubit_time, &JumpConfig::new(n, seed, j.dt_max))?;
            let (m, _) = res.observable(&pauli.sigma_z);
            sq += (m - exact_z).powi(2);
        }
        let rms = (sq / j.replicates as f64).sqrt();
        rows.push(vec![n as f64, rms, rms * (n as f64).sqrt()]);
        lns.push((n as f64).ln());
        lne.push(rms);
    }
    let slope = log_slope(&lns, &lne);
    out.check(Criterion::within("error_scaling_slope", slope, -0.65, -0.35));
    out.file("error_scaling.csv", csv(&["n_trajectories", "rms_error", "rms_error_sqrt_n"], &rows));
    out.file("qubit_trajectories.jsonl", run.records_jsonl()?);
    Ok(out)
}
