//! Noisy simulation of the two-qubit H2 variational eigensolver and three
//! error-mitigation schemes: [[4,2,2]] error detection with post-selection,
//! the duplicate-circuit (virtual distillation) estimator, and iterative
//! Bayesian readout unfolding.
//!
//! Qubit indices are 0-based in code; qubit 0 is "qubit 1" in the usual
//! notation and is the rightmost character of every bitstring.

pub mod chem;
pub mod circuits;
pub mod densesim;
mod error;
pub mod mitigation;
pub mod noise;
pub mod pauli;
pub mod vqe;

pub use error::{Error, Result};
