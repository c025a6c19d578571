//! Numerical toolkit for covariant quantum dynamical semigroups on
//! finite-dimensional truncations.

pub mod covariance;
pub mod error;
pub mod expm;
pub mod levy;
pub mod lindblad;
pub mod measurement;
pub mod models;
pub mod operator;
pub mod runner;
pub mod space;
pub mod states;
pub mod superop;

pub type C64 = num_complex::Complex64;

pub use error::{Error, Result};
pub use operator::{DensityMatrix, Operator};
pub use space::{HilbertSpace, SpaceKind};
pub use superop::{LinearMap, Superoperator};
pub use lindblad::LindbladGenerator;
