//! Core numerics for the spectral problem of the one-dimensional half-Laplacian
//! `|Δ|^{1/2}` restricted to the interval (−1, 1) with zero exterior condition.
//!
//! The operator acts on functions that vanish outside the interval; its action
//! is evaluated through a Hadamard finite-part integral which this crate
//! reduces to closed forms in sine/cosine integrals for the trigonometric
//! bases used throughout. On top of that sit a Galerkin assembler, a dense
//! symmetric eigensolver, and spectrum post-processing (parity merging, node
//! counts, asymptotic comparison).
//!
//! The crate is `no_std`-compatible (requires `alloc`); the `std` feature
//! switches the math shim to the platform intrinsics and `parallel` enables
//! multi-threaded matrix assembly.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]
// Frozen numeric tables (quadrature nodes, reference values in tests) keep
// the full digits they were generated with, beyond f64 round-trip length.
#![allow(clippy::excessive_precision)]

extern crate alloc;

pub mod eigensolver;
pub mod galerkin;
mod math;
pub mod operator;
pub mod quad;
pub mod specfun;
pub mod spectrum;

pub use eigensolver::{eigh, eigvals_only, EigenError, EigenPair, EigenSolveOptions};
pub use galerkin::{assemble, element, GalerkinBlock, GalerkinError, QuadratureSpec};
pub use operator::{
    apply_even_basis, apply_odd_basis, apply_oracle, trig_disproof_residual, BasisIndex,
    HypersingularLimitSpec, OperatorError, Parity, SmoothProfile, TrigCandidate,
};
pub use spectrum::{
    count_nodes, ground_state_approximant, merge, synthesize, Level, SampledFunction,
    SpectrumError, SpectrumReport,
};
