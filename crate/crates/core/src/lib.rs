//! Exact dense state-vector simulation of two singlet pairs under alternative
//! measurements on the inner particles.
//!
//! Particles 1–2 and 3–4 start in singlets. Measuring the z spin of 2 and 3
//! leaves 1 and 4 in one of four product states; measuring 2 and 3 in the Bell
//! basis leaves 1 and 4 in the same Bell state as the outcome. In both cases
//! the outcome-averaged reduced state of 1 and 4 is the maximally mixed state.
//!
//! Modules, bottom up:
//!
//! - [`qmath`]: small complex linear algebra (tensor products, Jacobi SVD and
//!   Hermitian eigensolver).
//! - [`states`]: computational kets, singlet, Bell states, the four-particle
//!   initial state, phase-insensitive comparison.
//! - [`measurement`]: projective measurement with Born probabilities, collapse
//!   and seeded sampling.
//! - [`analysis`]: partial trace, Schmidt decomposition, entropy, concurrence,
//!   spin correlators.
//! - [`experiments`]: the two canned experiments, Bell decomposition,
//!   no-signaling report and Monte Carlo harness.
//! - [`protocol`]: the `.qproto` measurement-protocol language.
//! - [`cli`]: command-line front end and report encoders.

pub mod analysis;
pub mod cli;
mod error;
pub mod experiments;
pub mod measurement;
pub mod protocol;
pub mod qmath;
pub mod states;

pub use error::{Error, Result};

/// Particle identifier. Smaller labels occupy more significant bits.
pub type Label = u32;
