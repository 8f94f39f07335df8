//! Numerical toolkit for sampling theory in doubling Fock spaces.
//!
//! The crate builds the objects underlying dominating-set / sampling-constant
//! analysis for weighted spaces of entire functions: doubling subharmonic
//! weights and their adapted metric `rho`, separated coverings with measured
//! overlap, planar region densities, Remez-type extremal polynomial probes,
//! Gram-matrix sampling constants for truncated Fock spaces, and truncated
//! Toeplitz operators with invertibility bounds.
//!
//! Everything is desk-scale and deterministic: randomized estimators consume
//! counter-derived streams from a single master seed, so reports reproduce
//! byte-for-byte.

pub mod covering;
pub mod quad;
pub mod regions;
pub mod remez;
pub mod rng;
pub mod sampling;
pub mod toeplitz;
pub mod weights;

pub use num_complex::Complex64;
