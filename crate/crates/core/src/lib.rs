//! Geometric-probability laboratory.
//!
//! Closed-form integral-geometry constants ([`exact`]), Crofton-type identities
//! checked by quadrature ([`crofton`]), and seeded Monte Carlo estimators for
//! Sylvester-type probabilities and random-secant densities ([`mc`]). Every
//! analytic value has an independent numeric or stochastic cross-check; the
//! [`battery`] module bundles those checks into one pass/fail run.

pub mod battery;
pub mod crofton;
pub mod error;
pub mod exact;
pub mod geom;
pub mod mc;
pub mod quad;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
