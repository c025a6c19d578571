//! Decoherence factors from Levy triplets: Gaussian, drift and a finite
//! list of momentum kicks, with the Bochner positivity check.

use covdyn::levy::{apply_decoherence, bochner_check, decoherence_factor, LevyTriplet};
use covdyn::states::gaussian_packet;
use covdyn::{DensityMatrix, HilbertSpace};

fn main() -> covdyn::Result<()> {
    let kicks = LevyTriplet {
        b: 0.0,
        d: 0.0,
        jumps: vec![(0.8, 0.4), (-1.3, 0.2)],
        hbar: 1.0,
    };
    let triplets = [("gaussian", LevyTriplet::gaussian(0.2)), ("kicks", kicks)];
    let points: Vec<f64> = (0..32).map(|k| k as f64 - 16.0).collect();
    for (name, tr) in &triplets {
        print!("{name:>9}:");
        for x in [0.0, 1.0, 2.0, 4.0, 8.0] {
            print!("  |Phi(1,{x})| = {:.4}", decoherence_factor(tr, 1.0, x).norm());
        }
        println!("\n           Bochner min eigenvalue {:.2e}", bochner_check(tr, 1.0, &points)?.min_eigenvalue);
    }

    let space = HilbertSpace::centered_grid(32, 1.0)?;
    let rho = DensityMatrix::pure(&space, &gaussian_packet(&space, 0.0, 0.0, 4.0)?)?;
    let out = apply_decoherence(&rho, &triplets[0].1, 2.0)?;
    println!("purity {:.4} -> {:.4}", rho.purity(), out.purity());
    Ok(())
}
