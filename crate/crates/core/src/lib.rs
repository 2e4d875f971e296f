//! Simulation toolkit for stimulated Raman adiabatic passage (STIRAP) and its
//! relatives in few-level quantum systems.
//!
//! The crate is organized around a small pipeline:
//!
//! - [`linkage`] declares level schemes (Λ, tripod, cavity-Λ, chains) and
//!   assembles the instantaneous rotating-wave Hamiltonian, including
//!   phenomenological non-Hermitian decay (`-iγ` on the diagonal).
//! - [`pulses`] provides complex pulse envelopes, counterintuitive and
//!   fractional pulse-pair builders, composite phased sequences, and
//!   counterdiabatic pulse synthesis.
//! - [`adiabatic`] analyzes the dressed-state frame: mixing angles,
//!   eigenvalues, dark-state vectors, and local/global adiabaticity metrics.
//! - [`propagator`] integrates `i dψ/dt = H(t) ψ` with an adaptive embedded
//!   Runge-Kutta 5(4) scheme (fixed-step RK4 retained as a cross-check),
//!   tracking populations, norm, and per-level losses.
//! - [`protocols`] packages the above into canned experiments: delay sweeps,
//!   fractional/b-/composite/superadiabatic STIRAP, rotation and tripod
//!   gates, cavity single-photon generation, and spatial waveguide analogs.
//!
//! Natural units are used throughout: ħ = 1, all frequencies, couplings and
//! decay rates in rad per unit time, time in the user's unit of choice. Only
//! dimensionless products (Ωτ, γτ) matter.

pub mod adiabatic;
pub mod linalg;
pub mod linkage;
pub mod propagator;
pub mod protocols;
pub mod pulses;
mod rk;

pub use num_complex::Complex64 as C64;
