use super::{max_of, rng};
use crate::error::Result;
use crate::models::{
    dho_generator, dho_gibbs_state, dynamic_structure_factor_mb, energy_transfer, momentum_gibbs_state,
    population_rate_matrix, qlbe_generator, two_level_generator, two_level_gibbs_state, DHOParams, QLBEParams,
    Temperature, TwoLevelParams,
};
use crate::operator::DensityMatrix;
use crate::runner::{csv, Criterion, ExperimentConfig, ScenarioOutcome};
use crate::space::HilbertSpace;

pub(super) fn qlbe_gibbs(c: &ExperimentConfig) -> Result<ScenarioOutcome> {
    let mut out = ScenarioOutcome::default();

    let d = &c.dho;
    let dho = DHOParams::new(d.omega, d.eta, Temperature::Beta(d.beta), d.dim);
    let r = dho_generator(&dho)?.apply(dho_gibbs_state(&dho)?.op()).trace_norm()?;
    out.check(Criterion::at_most("dho_gibbs_residual", r, 1e-8));

    let t = &c.two_level;
    let mut r2: f64 = 0.0;
    for &nb in &t.occupations {
        let p = TwoLevelParams::new(t.omega, t.eta, Temperature::Occupation(nb));
        r2 = r2.max(two_level_generator(&p)?.apply(two_level_gibbs_state(&p)?.op()).trace_norm()?);
    }
    out.check(Criterion::at_most("two_level_gibbs_residual", r2, 1e-13));

    let q = &c.qlbe;
    let space = HilbertSpace::centered_grid(q.points, q.dx)?;
    let cells: Vec<i64> = q.transfers.iter().map(|&m| m as i64).collect();
    let params = QLBEParams::contact(space, q.test_mass, q.gas_mass, q.beta, q.density, &cells, q.amplitude)?;
    let model = qlbe_generator(&params)?;
    let w = momentum_gibbs_state(&space, q.test_mass, q.beta)?;
    let rq = model.generator.apply(w.op()).trace_norm()?;
    out.check(Criterion::at_most("qlbe_gibbs_residual", rq, 1e-3));
    out.note("qlbe_dropped_weight", model.dropped_weight);

    let mut rng = rng(c);
    let mut tr: f64 = 0.0;
    for _ in 0..q.random_states {
        let rho = DensityMatrix::random(&space, &mut rng);
        tr = tr.max(model.generator.apply(rho.op()).trace().norm());
    }
    out.check(Criterion::at_most("qlbe_trace_preservation", tr, 1e-12));

    // S(q, E) = exp(-beta E) S(-q, -E) at every transfer and lattice momentum
    let grid = space.grid()?;
    let mut db: f64 = 0.0;
    let mut rows = Vec::new();
    for &(qv, _) in &params.t_tilde {
        for k in 0..grid.n {
            let pk = grid.p(k);
            let e = energy_transfer(qv, pk, q.test_mass);
            let fwd = dynamic_structure_factor_mb(qv, e, q.gas_mass, q.beta)?;
            let back = dynamic_structure_factor_mb(-qv, -e, q.gas_mass, q.beta)?;
            let rel = if fwd > 0.0 { (fwd - (-q.beta * e).exp() * back).abs() / fwd } else { 0.0 };
            db = db.max(rel);
            rows.push(vec![qv, pk, e, fwd]);
        }
    }
    out.check(Criterion::at_most("structure_factor_detailed_balance", db, 1e-12));

    let rates = population_rate_matrix(&model.generator)?;
    let col = max_of((0..grid.n).map(|b| rates.column(b).sum().abs()));
    out.check(Criterion::at_most("population_column_sums", col, 1e-12));
    // rates between lattice momenta obey detailed balance against the Gibbs weights
    let pop: Vec<f64> = (0..grid.n).map(|k| (-q.beta * grid.p(k).powi(2) / (2.0 * q.test_mass)).exp()).collect();
    let mut flux: f64 = 0.0;
    let scale = max_of(rates.iter().map(|v| v.abs()));
    for a in 0..grid.n {
        for b in 0..grid.n {
            if a != b {
                flux = flux.max((rates[[a, b]] * pop[b] - rates[[b, a]] * pop[a]).abs() / scale);
            }
        }
    }
    out.note("rate_matrix_detailed_balance", flux);
    out.file("structure_factor.csv", csv(&["q", "p", "energy_transfer", "s_mb"], &rows));
    Ok(out)
}
