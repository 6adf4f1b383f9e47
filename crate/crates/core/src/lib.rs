//! Spectral toolkit for thermoelastic plate equations with friction or
//! structural damping `(-Δ)^σ u_t`, `σ ∈ [0, 2]`, and heat conduction by
//! Fourier's law.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: parameters, the Fourier symbol `A(|ξ|;σ) = |ξ|²A₀ + |ξ|^{2σ}A₁`
//!   and the change of variables between `(û, û_t, θ̂)` and the first-order
//!   state `w = (û_t + |ξ|²û, û_t − |ξ|²û, θ̂)`.
//! - [`spectrum`]: exact characteristic roots, eigen-decompositions, the
//!   constants `y₁ … y₆`, spectral-gap scans and the high-frequency abscissa
//!   exponent.
//! - [`asymptotics`]: frequency zones, diagonalizer chains and asymptotic root
//!   formulas with empirical remainder-order fits.
//! - [`evolve`]: per-mode propagators, FFT evolution on periodic grids, the
//!   `σ = 1` complex heat kernel and the scalar third-order route.
//! - [`analysis`]: norms, moments, predicted rates, decay fits, reference
//!   systems, diffusion residuals and two-sided profile checks.
//! - [`cli`]: the experiment runner behind the `thermoplate` binary.

// Negated comparisons such as `!(x > 0.0)` are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod evolve;
pub mod linalg;
pub mod model;
pub mod regression;
pub mod spectrum;

pub use error::{Error, Result};
pub use model::{ModelParams, PhysicalTriple, StateVector, SymbolMatrix};
