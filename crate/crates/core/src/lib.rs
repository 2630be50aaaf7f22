//! Multiparameter quantum estimation limits for baryon-antibaryon spin states.
//!
//! The crate builds the X-shaped two-qubit density matrix of a hyperon pair
//! produced in `e+e- -> J/psi -> B Bbar`, computes its quantum Fisher
//! information matrix over the decay asymmetry and the production angle,
//! and derives simultaneous and individual Cramér-Rao variance bounds, with
//! or without a correlated random-telegraph dephasing channel.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`, which is what the command-line tool uses.

pub mod dephasing;
pub mod error;
pub mod matkit;
pub mod qfim;
pub mod scalar;
pub mod state;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Matrix = matkit::RealMatrix<f64>;
pub type SymEigen = matkit::SymEigen<f64>;
pub type PhysicsParams = state::PhysicsParams<f64>;
pub type SpinCorrelationMatrix = state::SpinCorrelationMatrix<f64>;
pub type XStateCoeffs = state::XStateCoeffs<f64>;
pub type XState = state::XState<f64>;
pub type XStatePartials = state::XStatePartials<f64>;
pub type QfiMatrix = qfim::QfiMatrix<f64>;
pub type SldOperator = qfim::SldOperator<f64>;
pub type VarianceBounds = qfim::VarianceBounds<f64>;
pub type NoiseModel = dephasing::NoiseModel<f64>;
pub type KrausSet = dephasing::KrausSet<f64>;
pub type Trajectory = dephasing::Trajectory<f64>;
