//! Numerics for freely infinitely divisible distributions.
//!
//! The crate evaluates free cumulant transforms C_μ and Cauchy transforms
//! G_μ of ⊞-infinitely divisible laws, recovers densities by Stieltjes
//! inversion, performs free additive convolution and dilation, builds
//! H-selfsimilar free additive processes out of freely selfdecomposable
//! base laws, and extracts their background driving free Lévy processes.
//!
//! Organization:
//! - [`measures`]: Lévy measures, free characteristic triplets (a, ν, η),
//!   free generating pairs (γ, σ), and classical Lévy–Khintchine evaluation.
//! - [`transforms`]: the complex-analytic engine — cumulant evaluation on
//!   the lower half-plane, the F⁻¹ fixed-point/Newton solver, Cauchy
//!   transforms, and density recovery.
//! - [`calculus`]: ⊞-convolution, dilation, and the Bercovici–Pata bijection.
//! - [`catalog`]: closed-form example laws (semicircle, free gamma, μ(p),
//!   Fuss–Catalan, free Poisson, point masses).
//! - [`processes`]: selfsimilar free additive processes, stochastic
//!   integrals, selfdecomposability tests, and BDLP extraction.
//! - [`rmt`]: random-matrix Monte Carlo validation.
//! - [`verify`]: the acceptance checks behind `freelevy verify`.

pub mod calculus;
pub mod catalog;
pub mod error;
pub mod jet;
pub mod measures;
pub mod processes;
pub mod quad;
pub mod rmt;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use jet::{Jet2, C64};
