use crate::error::Result;
use crate::levy::{apply_decoherence, bochner_check, decoherence_factor, phi_surface, LevyTriplet};
use crate::lindblad::evolve_operator;
use crate::models::{diffusion_generator, Diffusion};
use crate::operator::DensityMatrix;
use crate::runner::{csv, Criterion, ExperimentConfig, ScenarioOutcome};
use crate::space::HilbertSpace;
use crate::states::gaussian_packet;

pub(super) fn levy_surface(c: &ExperimentConfig) -> Result<ScenarioOutcome> {
    let l = &c.levy;
    let space = HilbertSpace::centered_grid(l.points, l.dx)?;
    let grid = space.grid()?;
    let half = (l.points / 2) as i64;
    // separations realised on the grid (minimal image)
    let seps: Vec<f64> = (-half..=half).map(|k| k as f64 * l.dx).collect();
    let points: Vec<f64> = grid.positions().to_vec();

    let (mut origin, mut modulus, mut mult, mut bochner): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, f64::INFINITY);
    let mut out = ScenarioOutcome::default();
    for nt in &l.triplets {
        let tr = &nt.triplet;
        for &t in &l.times {
            origin = origin.max((decoherence_factor(tr, t, 0.0) - 1.0).norm());
            for &x in &seps {
                let a = decoherence_factor(tr, t, x);
                modulus = modulus.max(a.norm() - 1.0);
                for &s in &l.times {
                    let joint = decoherence_factor(tr, t + s, x);
                    mult = mult.max((joint - a * decoherence_factor(tr, s, x)).norm());
                }
            }
            let rep = bochner_check(tr, t, &points)?;
            bochner = bochner.min(rep.min_eigenvalue);
            out.note(format!("bochner_min_eigenvalue/{}/t={t}", nt.name), rep.min_eigenvalue);
        }
        let rows: Vec<Vec<f64>> = phi_surface(tr, &l.times, &seps).into_iter().map(|r| r.to_vec()).collect();
        out.file(format!("phi_{}.csv", nt.name), csv(&["t", "x", "re", "im", "abs"], &rows));
    }
    out.check(Criterion::at_most("phi_at_origin", origin, 1e-14));
    out.check(Criterion::at_most("phi_modulus_excess", modulus, 1e-14));
    out.check(Criterion::at_most("phi_multiplicativity", mult, 1e-14));
    out.check(Criterion::at_least("bochner_min_eigenvalue", bochner, -1e-10));

    // D = 2 D_pp / hbar^2 reproduces -(D_pp / hbar^2)[x, [x, .]]
    let gauss = LevyTriplet::gaussian(2.0 * l.d_pp / (grid.hbar * grid.hbar));
    let rho0 = DensityMatrix::pure(&space, &gaussian_packet(&space, 0.0, 0.0, l.packet_sigma)?)?;
    let a = apply_decoherence(&rho0, &gauss, l.equivalence_time)?;
    let gen = diffusion_generator(
        &space,
        &Diffusion {
            d_pp: l.d_pp,
            d_xx: 0.0,
            mass: None,
        },
    )?;
    let b = evolve_operator(&gen, rho0.op(), l.equivalence_time)?;
    out.check(Criterion::at_most("gaussian_localization_equivalence", (a.op() - &b).trace_norm()?, 1e-12));
    Ok(out)
}
