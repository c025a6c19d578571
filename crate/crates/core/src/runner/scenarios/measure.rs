use ndarray::Array2;
use serde_json::json;

use super::rng;
use crate::covariance::{povm_covariance_residual, Group, ResidualReport, UnitaryRep};
use crate::error::{Error, Result};
use crate::measurement::{
    apply_instrument, gaussian_weights, joint_xp_instrument, joint_xp_povm, kraus_instrument, offset_moments,
    outcome_csv, smeared_position_povm, von_neumann_instrument, Region, SeedState,
};
use crate::operator::{DensityMatrix, Operator};
use crate::runner::{Criterion, ExperimentConfig, ScenarioOutcome};
use crate::space::HilbertSpace;
use crate::states::{basis, gaussian_packet};
use crate::C64;

pub(super) fn povm_joint(c: &ExperimentConfig) -> Result<ScenarioOutcome> {
    let p = &c.povm;
    let space = HilbertSpace::centered_grid(p.points, p.dx)?;
    let grid = space.grid()?;
    let seed = SeedState::gaussian(&space, p.sigma)?;
    let mut out = ScenarioOutcome::default();
    let povm = match joint_xp_povm(&space, &seed, p.frame_tolerance) {
        Ok(povm) => povm,
        Err(Error::FrameIncompleteness { defect, .. }) => {
            out.check(Criterion::at_most("frame_normalization_defect", defect, 1e-6));
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    out.check(Criterion::at_most("frame_normalization_defect", povm.normalization_defect(), 1e-6));

    // added noise of the two marginals: the seed's own position and momentum spreads
    let hx = seed.position_density()?;
    let hp = seed.momentum_density()?;
    let (_, vx) = offset_moments(&hx, grid.dx);
    let (_, vp) = offset_moments(&hp, grid.dp());
    let bound = grid.hbar * grid.hbar / 4.0;
    out.check(Criterion::at_most("marginal_variance_product_rel_deviation", (vx * vp / bound - 1.0).abs(), 0.02));
    out.note("position_variance", vx);
    out.note("momentum_variance", vp);

    let origin = (-grid.x_min / grid.dx).round() as i64;
    let w = p.rect_half_width;
    let xs = Region::interval(origin - w, origin + w + 1);
    let ps = Region::interval(-w, w + 1);
    let rect = Region::rect(&xs, &ps);

    let (mx, _) = povm.marginals()?;
    let smeared = smeared_position_povm(&space, hx.as_slice().expect("contiguous"))?;
    let marg = (&mx.effect(&xs)? - &smeared.effect(&xs)?).max_abs();
    out.note("marginal_smearing_identity", marg);

    let inst = joint_xp_instrument(&space, &seed, p.frame_tolerance)?;
    let dual = (&inst.effect(&rect)? - &povm.effect(&rect)?).max_abs();
    out.check(Criterion::at_most("instrument_dual_vs_povm", dual, 1e-10));

    let t = UnitaryRep::new(Group::Translation1d, &space)?;
    let b = UnitaryRep::new(Group::Boost1d, &space)?;
    for (rep, name, g) in [(&t, "joint_povm/translation", grid.dx), (&b, "joint_povm/boost", grid.dp())] {
        for k in [1.0, 3.0] {
            let res = povm_covariance_residual(&povm, rep, k * g, &rect)?;
            out.residuals.push(ResidualReport::new(name, vec![k * g], res, 1e-8));
        }
    }

    let psi = gaussian_packet(&space, 3.0 * grid.dx, 2.0 * grid.dp(), 1.5 * p.sigma)?;
    let rho = DensityMatrix::pure(&space, &psi)?;
    let rows: Vec<(String, f64)> = (0..grid.n as i64)
        .map(|j| Ok((format!("x{j}"), mx.probability(&rho, &Region::single(j))?)))
        .collect::<Result<_>>()?;
    out.file("position_marginal.csv", outcome_csv(&rows));
    let outcome = apply_instrument(&inst, &rho, &rect)?;
    out.json.push(("instrument_log.json".into(), json!([outcome.log(&rect)])));
    Ok(out)
}

fn kraus_repeat_defect(inst: &crate::measurement::Instrument, rho: &DensityMatrix, r: &Region) -> Result<f64> {
    let once = inst.apply(rho.op(), r)?;
    let twice = inst.apply(&once, r)?;
    (&twice - &once).trace_norm()
}

pub(super) fn instrument_repeat(c: &ExperimentConfig) -> Result<ScenarioOutcome> {
    let i = &c.instrument;
    let space = HilbertSpace::centered_grid(i.points, i.dx)?;
    let n = i.points;
    let projectors: Vec<Operator> = (0..n).map(|k| Operator::outer(&space, &basis(&space, k), &basis(&space, k))).collect();
    let pvm = von_neumann_instrument(projectors.clone())?;
    let mut regions: Vec<Region> = (0..n as i64).map(Region::single).collect();
    regions.push(Region::interval(n as i64 / 4, n as i64 / 2));

    // unsharp control: Kraus operators sqrt of a Gaussian-smeared position effect
    let h = gaussian_weights(&space.grid()?, i.sigma);
    let unsharp_ops: Vec<Vec<Operator>> = (0..n)
        .map(|k| {
            let d = Array2::from_diag(&ndarray::Array1::from_shape_fn(n, |j| {
                C64::new(h[(j + n - k) % n].sqrt(), 0.0)
            }));
            vec![Operator::from_matrix(space, d)]
        })
        .collect();
    let unsharp = kraus_instrument(&space, unsharp_ops)?;

    let mut rng = rng(c);
    let (mut rep, mut post, mut dual, mut control): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    let mut logs = Vec::new();
    let mut rows = Vec::new();
    for s in 0..i.random_states {
        let rho = DensityMatrix::random(&space, &mut rng);
        for r in &regions {
            rep = rep.max(kraus_repeat_defect(&pvm, &rho, r)?);
            let o = apply_instrument(&pvm, &rho, r)?;
            let again = o.posterior.expect(&pvm.effect(r)?).re;
            post = post.max((again - 1.0).abs());
            if s == 0 {
                logs.push(o.log(r));
                if r.len() == 1 {
                    rows.push((format!("x{}", r.axis(0).iter().next().unwrap()), o.probability));
                }
            }
        }
        for r in regions.iter().take(n) {
            control = control.max(kraus_repeat_defect(&unsharp, &rho, r)?);
        }
    }
    for r in &regions {
        let want = r.axis(0).iter().fold(Operator::zeros(&space), |acc, &k| &acc + &projectors[k as usize]);
        dual = dual.max((&pvm.effect(r)? - &want).max_abs());
    }
    let mut out = ScenarioOutcome::default();
    out.check(Criterion::at_most("von_neumann_repeatability", rep, 1e-13));
    out.check(Criterion::at_most("posterior_reconfirmation", post, 1e-13));
    out.note("instrument_dual_vs_projectors", dual);
    out.note("unsharp_repeatability_defect", control);
    out.file("outcomes.csv", outcome_csv(&rows));
    out.json.push(("instrument_log.json".into(), serde_json::to_value(&logs)?));
    Ok(out)
}
