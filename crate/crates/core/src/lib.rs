//! Lattice coset coding for the Gaussian wiretap channel.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised bottom-up:
//!
//! * [`lattice`] holds generator matrices, point enumeration, geometric
//!   parameters and closest-point decoding;
//! * [`theta`] evaluates Jacobi theta functions, lattice theta series, the
//!   secrecy function and the secrecy gain;
//! * [`snf`] computes Smith normal forms of integer matrices;
//! * [`coset`] builds quotient codes `Λ_b/Λ_e`, labels cosets with bits,
//!   encodes with random sublattice points and decodes;
//! * [`reed_muller`] carries the (8,4,4) code and the E8/2E8 example encoder;
//! * [`channel`] runs the AWGN wiretap Monte Carlo and the analytic
//!   approximations of Bob's and Eve's correct-decision probabilities.
//!
//! IO, file formats and the command line live in the `wiretap-cli` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod enumerate;
mod error;
mod linalg;

pub mod channel;
pub mod coset;
pub mod lattice;
pub mod reed_muller;
pub mod rng;
pub mod snf;
pub mod theta;

pub use error::{Error, Result};
pub use lattice::{ClosestPoint, Lattice, NamedLattice, NormSpectrum};
pub use linalg::Matrix;
