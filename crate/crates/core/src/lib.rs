//! Core physics of a biexciton cascade inside a polarization-degenerate
//! optical cavity in the strong-coupling regime.
//!
//! The crate computes, in order of dependency:
//!
//! * polariton eigenstates of the two coupled exciton/cavity modes per
//!   linear polarization ([`model`]),
//! * two-photon emission amplitudes of the biexciton -> polariton ->
//!   ground cascade and the radiative weights of the four decay channels
//!   ([`cascade`]),
//! * spectrally filtered two-photon density matrices, the entanglement
//!   degree gamma' and the concurrence, plus the quantum efficiency cost
//!   of filtering ([`entanglement`]),
//! * parameter sweeps and cavity-detuning optimization of the
//!   entanglement degree ([`explorer`]),
//! * the five-level bipolariton Hamiltonian and a symmetry tuning metric
//!   for the two-photon resonance ([`bipolariton`]).
//!
//! Numerical workhorses live in [`quadrature`] (adaptive Gauss-Kronrod
//! integration of the amplitude products) and [`simplex`] (derivative-free
//! refinement for the optimizers).
//!
//! The crate is `no_std` (with `alloc`); all IO, configuration parsing and
//! parallel dispatch belong to the companion CLI crate.
//!
//! Units: energies and linewidths in meV, times in ps. Couplings `Omega`
//! are energies (meV). Complex line positions follow the convention
//! `center + i * halfwidth`, i.e. a Lorentzian of FWHM `Gamma` has
//! halfwidth `Gamma / 2`.

#![no_std]
#![warn(missing_docs)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bipolariton;
pub mod cascade;
pub mod entanglement;
pub mod error;
pub mod explorer;
pub mod model;
pub mod quadrature;
pub mod simplex;

pub use error::CoreError;
pub use model::{Branch, Detunings, Polarization, PolaritonState, SystemParams, HBAR_MEV_PS};
