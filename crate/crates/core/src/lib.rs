//! Conditional phase statistics of the two-wave with diffuse power (TWDP)
//! fading process.
//!
//! The crate evaluates the density of the received phase given the phase of
//! the stronger specular ray, using
//!
//! - a truncated Poisson-weighted series ([`phase::PhasePdfSpec`]), the
//!   production evaluator,
//! - a closed form built on Humbert and triple hypergeometric series
//!   ([`closed_form`]),
//! - a direct quadrature over the Rician envelope ([`phase::phase_pdf_oracle`]),
//! - two stochastic generators ([`simulate`]),
//!
//! and derives the M-PSK phase-synchronization error probability from it
//! ([`perf`]).
//!
//! Data-parallel loops (grid evaluation, Monte Carlo chunks, simulator
//! realizations, error-probability sweeps) run on rayon when the `parallel`
//! feature is enabled. Every such entry point takes an [`Execution`] policy and
//! produces bit-identical output under both policies.

// `!(x > 0.0)` style guards reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closed_form;
mod error;
mod exec;
pub mod params;
pub mod perf;
pub mod phase;
pub mod quad;
pub mod simulate;
pub mod specfun;

pub use error::{Error, Result};
pub use exec::Execution;
pub use params::{wrap_phase, ChannelParams, NormalizedParams};
