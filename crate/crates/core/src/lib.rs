//! Numerical toolkit for free and Boolean convolution semigroups on the
//! positive half-line and the circle.
//!
//! The crate provides:
//!
//! - analytic transforms of probability measures (Cauchy, F, η, Σ, S,
//!   Voiculescu) together with Stieltjes inversion and density comparison
//!   metrics ([`measures`]);
//! - a catalog of closed-form laws: classical/free/Boolean stable laws,
//!   Cauchy, the upper-triangular-matrix spectral law, free Bessel and
//!   related families ([`laws`]);
//! - the calculus of maps `η(x) = x·exp(−u(x))` on the negative half-line:
//!   Boolean and free convolution powers, subordination, the
//!   Boolean-to-free map and its complex continuation near 1 ([`ecalc`]);
//! - small-time Boolean and free multiplicative limit experiments and the
//!   large-time quantile limit ([`boolean_small_time`], [`free_small_time`]);
//! - Mellin-moment formulas for multiplicative power laws
//!   ([`mellin_moments`]);
//! - the wrapping map from the line to the circle and unitary small-time
//!   experiments ([`circle_wrap`]);
//! - a seeded sampler for strictly upper-triangular complex Gaussian
//!   matrices with a Hermitian eigensolver ([`dt_randmat`]);
//! - the acceptance/verification suite used by the CLI and the integration
//!   tests ([`verify`]).

pub mod error;
pub mod specfun;
pub mod measures;
pub mod laws;
pub mod ecalc;
pub mod boolean_small_time;
pub mod free_small_time;
pub mod mellin_moments;
pub mod circle_wrap;
pub mod dt_randmat;
pub mod verify;

mod tridiag;

pub use error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type Complex = num_complex::Complex64;
