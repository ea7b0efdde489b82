//! Exact finite-N analysis of the two-species Ehrenfest urn.
//!
//! `N` balls move between two urns. `m` of them are *heavy* and are resampled
//! at Poisson rate `α`; the remaining `n = N - m` *regular* balls are
//! resampled at rate 1. A resampled ball picks an urn with a fair coin.
//!
//! The crate computes, at a fixed `N`:
//!
//! - the exact laws of the chain `(R_t, H_t)` and of the ball count
//!   `W_t = R_t + H_t` ([`dist`]),
//! - analytic upper and lower bounds on both distances to stationarity
//!   ([`bounds`]),
//! - exact checks of the negative dependence of the survival indicators
//!   and of the chi-square bound it implies ([`negdep`]),
//! - reproducible Monte Carlo samplers used as physical-model oracles ([`mc`]),
//! - regime classification and mixing-time extraction ([`phase`]).
//!
//! The [`cli`] module backs the `urnlab` binary.

pub mod bounds;
pub mod cli;
pub mod dist;
pub mod mc;
pub mod model;
pub mod negdep;
pub mod phase;

mod error;

pub use error::{Error, Result};
pub use model::{InitialState, ModelParams, ParamFamily};
