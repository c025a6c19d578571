//! Lindblad generators, their propagation, and quantum-jump unraveling.

mod generator;
mod jumps;
mod propagate;

pub use generator::LindbladGenerator;
pub use jumps::{mean_and_error, trajectory_seed, unravel_jumps, JumpConfig, JumpResult, TrajectoryRecord};
pub use propagate::{evolve_expm, evolve_expm_times, evolve_ode, evolve_operator, integrate, propagator};
