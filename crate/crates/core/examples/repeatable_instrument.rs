//! A von Neumann instrument is repeatable; a Gaussian-smeared Kraus
//! instrument is not.

use covdyn::measurement::{gaussian_weights, kraus_instrument, von_neumann_instrument, Region};
use covdyn::states::basis;
use covdyn::{DensityMatrix, HilbertSpace, Operator, C64};
use ndarray::{Array1, Array2};
use rand::SeedableRng;

fn main() -> covdyn::Result<()> {
    let n = 16;
    let space = HilbertSpace::centered_grid(n, 1.0)?;
    let proj: Vec<Operator> = (0..n).map(|k| Operator::outer(&space, &basis(&space, k), &basis(&space, k))).collect();
    let sharp = von_neumann_instrument(proj)?;

    let h = gaussian_weights(&space.grid()?, 1.5);
    let kraus = (0..n)
        .map(|k| {
            let d = Array1::from_shape_fn(n, |j| C64::new(h[(j + n - k) % n].sqrt(), 0.0));
            vec![Operator::from_matrix(space, Array2::from_diag(&d))]
        })
        .collect();
    let unsharp = kraus_instrument(&space, kraus)?;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let rho = DensityMatrix::random(&space, &mut rng);
    let region = Region::interval(4, 8);
    for (name, inst) in [("von neumann", &sharp), ("gaussian kraus", &unsharp)] {
        let once = inst.apply(rho.op(), &region)?;
        let twice = inst.apply(&once, &region)?;
        println!("{name:>15}: ||F(F(rho)) - F(rho)||_1 = {:.3e}", (&twice - &once).trace_norm()?);
    }
    Ok(())
}
