//! Spectrum of graphene's Dirac Hamiltonian in a constant magnetic field
//! under dynamical (position-dependent) noncommutativity.
//!
//! The crate builds the Hamiltonian on a truncated two-mode Fock space,
//! diagonalizes it exactly, runs degenerate Rayleigh–Schrödinger perturbation
//! theory against that oracle, and evaluates the closed-form phenomenology
//! (bound on the deformation parameter τ, T = 0 equations of state).
//!
//! Natural units are used internally: `ħ = v_F = l_B = 1`, so energies are in
//! units of `ħ v_F / l_B`, Θ in `l_B²` and τ in `l_B⁻²`.

pub mod algebra;
pub mod cli;
pub mod config;
pub mod error;
pub mod fock;
pub mod hamiltonian;
pub mod phenomenology;
pub mod report;
pub mod spectral;
pub mod units;

pub use error::{Error, Result};
