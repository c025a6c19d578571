use ndarray::Array2;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::{hermitian_part, DensityMatrix, Operator};
use crate::space::HilbertSpace;
use crate::superop::KrausMap;
use crate::C64;

use super::povm::{joint_xp_povm, validate_pvm, weyl_translate, Povm, SeedState};
use super::Region;

#[derive(Debug, Clone)]
enum Kind {
    /// Rank-one Kraus operators `sqrt(lambda_r / n) |psi><psi|` built from a
    /// joint POVM's packets.
    Packets(Povm),
    /// Explicit Kraus lists, one per outcome index.
    Kraus(Vec<Vec<Operator>>),
}

/// Region-indexed family of completely positive operations.
#[derive(Debug, Clone)]
pub struct Instrument {
    space: HilbertSpace,
    ranges: Vec<(i64, i64)>,
    kind: Kind,
}

#[derive(Debug, Clone)]
pub struct InstrumentOutcome {
    /// `F(M)[rho]`, unnormalized.
    pub operation: Operator,
    pub probability: f64,
    pub posterior: DensityMatrix,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstrumentLog {
    pub region: Region,
    pub probability: f64,
    pub posterior_purity: f64,
}

impl InstrumentOutcome {
    pub fn log(&self, region: &Region) -> InstrumentLog {
        InstrumentLog {
            region: region.clone(),
            probability: self.probability,
            posterior_purity: self.posterior.purity(),
        }
    }
}

/// Phase-space instrument `F(M×N)[rho] = sum (1/n) |psi><psi| rho |psi><psi|`
/// whose dual reproduces [`joint_xp_povm`].
pub fn joint_xp_instrument(space: &HilbertSpace, seed: &SeedState, tolerance: f64) -> Result<Instrument> {
    let povm = joint_xp_povm(space, seed, tolerance)?;
    Ok(Instrument {
        space: *space,
        ranges: povm.ranges().to_vec(),
        kind: Kind::Packets(povm),
    })
}

/// Repeatable instrument `F(M)[rho] = sum_{i in M} E_i rho E_i`.
pub fn von_neumann_instrument(projectors: Vec<Operator>) -> Result<Instrument> {
    let space = *validate_pvm(&projectors)?;
    let n = projectors.len() as i64;
    Ok(Instrument {
        space,
        ranges: vec![(0, n)],
        kind: Kind::Kraus(projectors.into_iter().map(|e| vec![e]).collect()),
    })
}

/// Instrument from explicit Kraus lists, one list per outcome.
pub fn kraus_instrument(space: &HilbertSpace, outcomes: Vec<Vec<Operator>>) -> Result<Instrument> {
    for v in outcomes.iter().flatten() {
        if v.space() != space {
            return Err(Error::SpaceMismatch("kraus operator on another space".into()));
        }
    }
    Ok(Instrument {
        space: *space,
        ranges: vec![(0, outcomes.len() as i64)],
        kind: Kind::Kraus(outcomes),
    })
}

impl Instrument {
    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn total_region(&self) -> Region {
        match self.ranges.as_slice() {
            [(lo, hi)] => Region::interval(*lo, *hi),
            [(a, b), (c, d)] => Region::rect(&Region::interval(*a, *b), &Region::interval(*c, *d)),
            _ => unreachable!("instruments have one or two axes"),
        }
    }

    /// The operation of a region as a Kraus map.
    pub fn operation(&self, region: &Region) -> Result<KrausMap> {
        region.check_within(&self.ranges)?;
        let ops = match &self.kind {
            Kind::Kraus(lists) => region
                .axis(0)
                .iter()
                .flat_map(|&i| lists[i as usize].iter().cloned())
                .collect(),
            Kind::Packets(povm) => {
                let (seeds, origin) = povm.seeds().expect("joint povm");
                let n = self.space.dim() as f64;
                let mut ops = Vec::new();
                for l in region.labels() {
                    for (w, s) in seeds {
                        let v = weyl_translate(s, origin, l[0], l[1]);
                        ops.push(Operator::outer(&self.space, &v, &v).scale_real((w / n).sqrt()));
                    }
                }
                ops
            }
        };
        KrausMap::new(&self.space, ops)
    }

    /// `F(M)[rho]`.
    pub fn apply(&self, rho: &Operator, region: &Region) -> Result<Operator> {
        region.check_within(&self.ranges)?;
        match &self.kind {
            Kind::Packets(povm) => {
                let (seeds, origin) = povm.seeds().expect("joint povm");
                let d = self.space.dim();
                let n = d as f64;
                let mut out = Array2::<C64>::zeros((d, d));
                for l in region.labels() {
                    for (w, s) in seeds {
                        let v = weyl_translate(s, origin, l[0], l[1]);
                        let amp: C64 = rho.sandwich(&v, &v) * (w / n);
                        for a in 0..d {
                            let va = v[a] * amp;
                            for b in 0..d {
                                out[[a, b]] += va * v[b].conj();
                            }
                        }
                    }
                }
                Ok(Operator::from_matrix(self.space, out))
            }
            Kind::Kraus(_) => Ok(self.operation(region)?.apply(rho)),
        }
    }

    /// `F'(M)[1] = sum K^dag K`, the effect this instrument measures.
    pub fn effect(&self, region: &Region) -> Result<Operator> {
        let map = self.operation(region)?;
        let out = map.apply_adjoint(&Operator::identity(&self.space));
        Ok(Operator::from_matrix(self.space, hermitian_part(out.matrix())))
    }

    /// The POVM underlying a phase-space instrument.
    pub fn povm(&self) -> Option<&Povm> {
        match &self.kind {
            Kind::Packets(p) => Some(p),
            Kind::Kraus(_) => None,
        }
    }
}

/// Outcome operator, probability and a-posteriori state of `region`.
pub fn apply_instrument(inst: &Instrument, rho: &DensityMatrix, region: &Region) -> Result<InstrumentOutcome> {
    if rho.space() != inst.space() {
        return Err(Error::SpaceMismatch("state and instrument on different spaces".into()));
    }
    let operation = inst.apply(rho.op(), region)?;
    let probability = operation.trace().re;
    if !(probability > 1e-12) {
        return Err(Error::NullEvent(probability));
    }
    let post = hermitian_part(&operation.matrix().mapv(|z| z / probability));
    let posterior = DensityMatrix::new(Operator::from_matrix(*inst.space(), post))?;
    Ok(InstrumentOutcome {
        operation,
        probability,
        posterior,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::gaussian_packet;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn qubit_pvm() -> Vec<Operator> {
        let q = HilbertSpace::qubit();
        let p = crate::space::pauli_ops(&q).unwrap();
        vec![p.sigma_minus.dot(&p.sigma_plus), p.sigma_plus.dot(&p.sigma_minus)]
    }

    #[test]
    fn projection_on_plus_state() {
        let q = HilbertSpace::qubit();
        let inst = von_neumann_instrument(qubit_pvm()).unwrap();
        let plus = ndarray::arr1(&[C64::new(1.0, 0.0), C64::new(1.0, 0.0)]);
        let rho = DensityMatrix::pure(&q, &plus).unwrap();
        for k in 0..2 {
            let out = apply_instrument(&inst, &rho, &Region::single(k)).unwrap();
            assert!((out.probability - 0.5).abs() < 1e-15);
            assert!((out.posterior.population(k as usize) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn repeatability_and_disjoint_composition() {
        let q = HilbertSpace::qubit();
        let inst = von_neumann_instrument(qubit_pvm()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f0 = inst.operation(&Region::single(0)).unwrap();
        let f1 = inst.operation(&Region::single(1)).unwrap();
        for _ in 0..20 {
            let rho = DensityMatrix::random(&q, &mut rng);
            let once = f0.apply(rho.op());
            let twice = f0.compose(&f0).apply(rho.op());
            assert!((&once - &twice).max_abs() <= 1e-13);
            assert_eq!(f0.compose(&f1).apply(rho.op()).max_abs(), 0.0);
        }
    }

    #[test]
    fn overlapping_projectors_rejected() {
        let q = HilbertSpace::qubit();
        let mut ps = qubit_pvm();
        ps[1] = Operator::identity(&q);
        assert!(matches!(von_neumann_instrument(ps), Err(Error::InvalidPvm(_))));
    }

    #[test]
    fn phase_space_instrument_dual_and_posterior() {
        let s = HilbertSpace::centered_grid(32, 1.0).unwrap();
        let seed = SeedState::gaussian(&s, 2.0).unwrap();
        let inst = joint_xp_instrument(&s, &seed, 1e-6).unwrap();
        let povm = inst.povm().unwrap();
        let r = Region::rect(&Region::interval(14, 19), &Region::interval(-2, 3));
        let diff = (&inst.effect(&r).unwrap() - &povm.effect(&r).unwrap()).max_abs();
        assert!(diff <= 1e-10);

        let psi = gaussian_packet(&s, 0.0, 0.0, 2.0).unwrap();
        let rho = DensityMatrix::pure(&s, &psi).unwrap();
        let small = Region::rect(&Region::single(16), &Region::single(0));
        let out = apply_instrument(&inst, &rho, &small).unwrap();
        assert!(out.posterior.fidelity_with_pure(&psi) > 0.9);
        let p = povm.probability(&rho, &small).unwrap();
        assert!((p - out.probability).abs() <= 1e-12);
        let total = inst.apply(rho.op(), &inst.total_region()).unwrap().trace().re;
        assert!((total - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn null_event_rejected() {
        let q = HilbertSpace::qubit();
        let inst = von_neumann_instrument(qubit_pvm()).unwrap();
        let ground = crate::states::basis(&q, 0);
        let rho = DensityMatrix::pure(&q, &ground).unwrap();
        assert!(matches!(
            apply_instrument(&inst, &rho, &Region::single(1)),
            Err(Error::NullEvent(_))
        ));
    }
}
