//! Transient quantum dynamics of bound states subjected to a sudden
//! perturbation.
//!
//! The crate is organised around three independent routes to the same
//! physics, each checking the others:
//!
//! * [`kernels`]: exact Gaussian propagators (free particle, constant force,
//!   harmonic oscillator, driven oscillator) stored in coefficient form, with
//!   closed-form composition and application to Gaussian and plane-wave
//!   states;
//! * [`spectral`]: the truncated-eigenbasis procedure, which expands the
//!   initial eigenstate of the unperturbed Hamiltonian, diagonalises the
//!   truncated perturbed Hamiltonian and evolves by phase factors;
//! * brute-force quadrature of the propagator integral
//!   ([`numerics::apply_kernel_numeric`]).
//!
//! [`systems`] assembles the deuteron in a suddenly applied electrostatic
//! field and [`diffraction`] implements the quantum shutter (diffraction in
//! time). Units are natural throughout: ħ = m = c = 1.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod cli;
pub mod diffraction;
mod error;
pub mod kernels;
pub mod numerics;
pub mod spectral;
pub mod systems;

pub use error::{Error, Result};
pub use num_complex::Complex64;
