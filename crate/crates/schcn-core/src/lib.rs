//! Analysis and simulation of selective-combining hybrid AF/DF cooperative
//! relay networks over block Rayleigh fading.
//!
//! The crate is split into five layers:
//!
//! * [`math`] — scalar numerics: Q-function, truncated-exponential moments,
//!   adaptive quadrature on `[0, ∞)`, bracketed root finding.
//! * [`fer`] — the SNR-threshold frame-error-rate approximation model:
//!   instantaneous AWGN FER, the diversity-aware threshold, the prior-art
//!   threshold, and outage-form average FER.
//! * [`mimo`] — the STBC/MRC worked example used to validate the threshold
//!   model against the numerically optimal threshold.
//! * [`analytic`] — closed-form and asymptotic CDF/FER machinery for the
//!   selection-combined hybrid network (per-relay link CDF, equivalent-rate
//!   reduction, partial-fraction CDF of the combiner output).
//! * [`sim`] — a seedable Monte Carlo link simulator (semi-analytic and
//!   bit-level fidelities) used to cross-validate the analysis.
//!
//! The crate is `no_std` (with `alloc`); all floating-point transcendentals
//! go through `libm` so results are identical across targets.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analytic;
mod error;
pub mod fer;
pub mod math;
pub mod mimo;
pub mod sim;

pub use error::Error;

/// Convert a linear SNR to decibels.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * libm::log10(x)
}

/// Convert an SNR in decibels to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    libm::pow(10.0, db / 10.0)
}
