//! Quantum-jump unraveling of a Lindblad generator.
//!
//! Between jumps a trajectory follows `exp(-K t) psi`; the squared norm is
//! the survival probability, so a jump happens when it falls below a uniform
//! draw `u`. The crossing time is located by bisection over precomputed
//! no-jump propagators for `dt_max / 2^k`, `k = 0..=40`.

use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expm::expm;
use crate::lindblad::LindbladGenerator;
use crate::operator::{norm_sqr, DensityMatrix, Operator};
use crate::C64;

const LEVELS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpConfig {
    pub n_trajectories: usize,
    pub master_seed: u64,
    pub dt_max: f64,
    /// Squared-norm floor below which a trajectory counts as lost.
    pub norm_tolerance: f64,
}

impl JumpConfig {
    pub fn new(n_trajectories: usize, master_seed: u64, dt_max: f64) -> Self {
        JumpConfig {
            n_trajectories,
            master_seed,
            dt_max,
            norm_tolerance: 1e-300,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_trajectories == 0 {
            return Err(Error::param("n_trajectories", "must be at least 1"));
        }
        if !(self.dt_max > 0.0 && self.dt_max.is_finite()) {
            return Err(Error::param("dt_max", "must be positive"));
        }
        if !(self.norm_tolerance >= 0.0) {
            return Err(Error::param("norm_tolerance", "must be nonnegative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub trajectory_id: usize,
    pub jump_times: Vec<f64>,
    pub channels: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct JumpResult {
    pub rho: DensityMatrix,
    pub records: Vec<TrajectoryRecord>,
    /// Normalized final states, in trajectory order (lost trajectories omitted).
    pub final_states: Vec<Array1<C64>>,
    pub lost: usize,
}

impl JumpResult {
    /// Sample mean and standard error of `<psi|A|psi>` over trajectories.
    pub fn observable(&self, a: &Operator) -> (f64, f64) {
        let values: Vec<f64> = self.final_states.iter().map(|psi| a.sandwich(psi, psi).re).collect();
        mean_and_error(&values)
    }

    /// First-jump times of trajectories that jumped at least once.
    pub fn first_jump_times(&self) -> Vec<f64> {
        self.records.iter().filter_map(|r| r.jump_times.first().copied()).collect()
    }

    /// JSON lines, one record per trajectory.
    pub fn records_jsonl(&self) -> Result<String> {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r)?);
            out.push('\n');
        }
        Ok(out)
    }
}

pub fn mean_and_error(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Seed of trajectory `i`.
pub fn trajectory_seed(master_seed: u64, i: usize) -> u64 {
    master_seed ^ i as u64
}

struct NoJump {
    steps: Vec<Array2<C64>>,
    widths: Vec<f64>,
}

impl NoJump {
    fn new(gen: &LindbladGenerator, dt: f64) -> Result<Self> {
        let k = gen.effective_k().matrix();
        let mut steps = Vec::with_capacity(LEVELS + 1);
        let mut widths = Vec::with_capacity(LEVELS + 1);
        for level in 0..=LEVELS {
            let h = dt / 2f64.powi(level as i32);
            steps.push(expm(&k.mapv(|z| -z * h))?);
            widths.push(h);
        }
        Ok(NoJump { steps, widths })
    }

    /// Largest level whose width fits in `remaining`.
    fn level_for(&self, remaining: f64) -> Option<usize> {
        self.widths.iter().position(|&w| w <= remaining * (1.0 + 1e-12))
    }
}

enum Outcome {
    Done(Array1<C64>, TrajectoryRecord),
    Lost,
}

/// Unravel `gen` from the pure state `psi0` up to time `t`. The average uses
/// the trajectories in index order, so the result does not depend on how
/// rayon schedules them.
pub fn unravel_jumps(gen: &LindbladGenerator, psi0: &Array1<C64>, t: f64, config: &JumpConfig) -> Result<JumpResult> {
    config.validate()?;
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let space = *gen.space();
    if psi0.len() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            got: psi0.len(),
        });
    }
    let n0 = norm_sqr(psi0);
    if (n0 - 1.0).abs() > 1e-10 {
        return Err(Error::param("psi0", format!("must be normalized, squared norm {n0}")));
    }
    let nojump = NoJump::new(gen, config.dt_max)?;
    let ops: Vec<&Array2<C64>> = gen.lindblad_ops().iter().map(|l| l.matrix()).collect();

    let outcomes: Vec<Outcome> = (0..config.n_trajectories)
        .into_par_iter()
        .map(|i| run_trajectory(i, &nojump, &ops, psi0, t, config))
        .collect();

    let d = space.dim();
    let mut rho = Array2::<C64>::zeros((d, d));
    let mut records = Vec::with_capacity(outcomes.len());
    let mut final_states = Vec::with_capacity(outcomes.len());
    let mut lost = 0;
    for o in outcomes {
        match o {
            Outcome::Done(psi, rec) => {
                for a in 0..d {
                    for b in 0..d {
                        rho[[a, b]] += psi[a] * psi[b].conj();
                    }
                }
                records.push(rec);
                final_states.push(psi);
            }
            Outcome::Lost => lost += 1,
        }
    }
    if lost * 1000 > config.n_trajectories || final_states.is_empty() {
        return Err(Error::TrajectoryLost {
            lost,
            total: config.n_trajectories,
        });
    }
    let kept = final_states.len() as f64;
    rho.mapv_inplace(|z| z / kept);
    let rho = DensityMatrix::new(Operator::from_matrix(space, crate::operator::hermitian_part(&rho)))?;
    Ok(JumpResult {
        rho,
        records,
        final_states,
        lost,
    })
}

fn run_trajectory(
    id: usize,
    nojump: &NoJump,
    ops: &[&Array2<C64>],
    psi0: &Array1<C64>,
    t: f64,
    config: &JumpConfig,
) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(trajectory_seed(config.master_seed, id));
    let mut record = TrajectoryRecord {
        trajectory_id: id,
        jump_times: Vec::new(),
        channels: Vec::new(),
    };
    let mut psi = psi0.clone();
    let mut now = 0.0;
    let mut u: f64 = rng.random();

    while let Some(level) = nojump.level_for(t - now) {
        let candidate = nojump.steps[level].dot(&psi);
        let n2 = norm_sqr(&candidate);
        if !n2.is_finite() || n2 < config.norm_tolerance {
            return Outcome::Lost;
        }
        if ops.is_empty() || n2 >= u {
            psi = candidate;
            now += nojump.widths[level];
            continue;
        }
        // the crossing lies inside this piece; bisect
        for sub in level + 1..=LEVELS {
            let trial = nojump.steps[sub].dot(&psi);
            if norm_sqr(&trial) >= u {
                psi = trial;
                now += nojump.widths[sub];
            }
        }
        let jumped: Vec<Array1<C64>> = ops.iter().map(|l| l.dot(&psi)).collect();
        let weights: Vec<f64> = jumped.iter().map(norm_sqr).collect();
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Outcome::Lost;
        }
        let mut pick = rng.random::<f64>() * total;
        let mut channel = weights.len() - 1;
        for (j, w) in weights.iter().enumerate() {
            if pick < *w {
                channel = j;
                break;
            }
            pick -= w;
        }
        let nj = weights[channel].sqrt();
        psi = jumped[channel].mapv(|z| z / nj);
        record.jump_times.push(now);
        record.channels.push(channel);
        u = rng.random();
    }
    let n = norm_sqr(&psi).sqrt();
    if !(n > 0.0) || !n.is_finite() {
        return Outcome::Lost;
    }
    Outcome::Done(psi.mapv(|z| z / n), record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::evolve_expm;
    use crate::space::{pauli_ops, HilbertSpace};

    fn excited() -> Array1<C64> {
        ndarray::arr1(&[C64::new(0.0, 0.0), C64::new(1.0, 0.0)])
    }

    #[test]
    fn closed_system_has_no_jumps() {
        let q = HilbertSpace::qubit();
        let p = pauli_ops(&q).unwrap();
        let g = LindbladGenerator::unitary(p.sigma_x.clone()).unwrap();
        let res = unravel_jumps(&g, &excited(), 1.3, &JumpConfig::new(20, 3, 0.1)).unwrap();
        assert!(res.records.iter().all(|r| r.jump_times.is_empty()));
        let exact = evolve_expm(&g, &DensityMatrix::pure(&q, &excited()).unwrap(), 1.3).unwrap();
        assert!((res.rho.op() - exact.op()).max_abs() < 1e-12);
    }

    #[test]
    fn first_jump_is_exponential() {
        let q = HilbertSpace::qubit();
        let p = pauli_ops(&q).unwrap();
        let eta: f64 = 1.7;
        let g = LindbladGenerator::new(Operator::zeros(&q), vec![p.sigma_minus.scale_real(eta.sqrt())]).unwrap();
        let res = unravel_jumps(&g, &excited(), 60.0, &JumpConfig::new(10_000, 11, 0.5)).unwrap();
        let times = res.first_jump_times();
        assert_eq!(times.len(), 10_000);
        let (mean, se) = mean_and_error(&times);
        assert!((mean - 1.0 / eta).abs() < 3.0 * se, "{mean} +- {se}");
        assert!(res.records.iter().all(|r| r.channels == vec![0]));
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let q = HilbertSpace::qubit();
        let p = pauli_ops(&q).unwrap();
        let g = LindbladGenerator::new(p.sigma_z.clone(), vec![p.sigma_minus.clone(), p.sigma_plus.scale_real(0.5)]).unwrap();
        let cfg = JumpConfig::new(200, 99, 0.25);
        let run = |w: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .unwrap()
                .install(|| unravel_jumps(&g, &excited(), 2.0, &cfg).unwrap())
        };
        let a = run(1);
        let b = run(3);
        assert_eq!(a.records, b.records);
        assert_eq!(a.rho, b.rho);
    }

    #[test]
    fn records_serialize_as_json_lines() {
        let q = HilbertSpace::qubit();
        let p = pauli_ops(&q).unwrap();
        let g = LindbladGenerator::new(Operator::zeros(&q), vec![p.sigma_minus.clone()]).unwrap();
        let res = unravel_jumps(&g, &excited(), 5.0, &JumpConfig::new(3, 1, 1.0)).unwrap();
        let text = res.records_jsonl().unwrap();
        let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert!(first.get("trajectory_id").is_some());
        assert!(first.get("jump_times").unwrap().is_array());
        assert!(first.get("channels").unwrap().is_array());
    }
}
