//! Orthogonal space-time block coding with maximum ratio combining: the
//! worked example used to validate the threshold model against the
//! numerically optimal threshold.
//!
//! With `N_T` transmit and `N_R` receive antennas over i.i.d. Rayleigh
//! fading, the post-combining SNR is a sum of `N = N_T·N_R` exponentials of
//! mean `γ̄/N_T`, i.e. Erlang with shape `N` and rate `N_T/γ̄`. The exact
//! average FER is computable by quadrature, which makes the gap between the
//! model threshold and the truly optimal threshold measurable.

use crate::fer::{self, ModulationSpec};
use crate::math::{self, factorial};
use crate::Error;

/// Antenna configuration and average per-receive-antenna SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MimoConfig {
    pub n_t: u32,
    pub n_r: u32,
    /// Average SNR `γ̄` (linear).
    pub avg_snr: f64,
}

impl MimoConfig {
    pub fn new(n_t: u32, n_r: u32, avg_snr: f64) -> Self {
        assert!(n_t >= 1 && n_r >= 1 && avg_snr > 0.0);
        MimoConfig { n_t, n_r, avg_snr }
    }

    /// Diversity order `N = N_T·N_R`.
    pub fn diversity(&self) -> u32 {
        self.n_t * self.n_r
    }

    /// Rate parameter `N_T/γ̄` of each SNR summand.
    pub fn rate(&self) -> f64 {
        self.n_t as f64 / self.avg_snr
    }
}

/// CDF of the post-combining SNR (Erlang with shape `N`, rate `N_T/γ̄`).
pub fn mimo_snr_cdf(gamma: f64, cfg: &MimoConfig) -> f64 {
    if gamma <= 0.0 {
        return 0.0;
    }
    let n = cfg.diversity();
    let rate = cfg.rate();
    let f = libm::pow(rate, n as f64) / factorial(n - 1) * math::g_lower(n - 1, rate, gamma);
    f.clamp(0.0, 1.0)
}

/// PDF of the post-combining SNR.
pub fn mimo_snr_pdf(gamma: f64, cfg: &MimoConfig) -> f64 {
    if gamma <= 0.0 {
        return 0.0;
    }
    let n = cfg.diversity();
    let rate = cfg.rate();
    libm::exp(
        n as f64 * libm::log(rate) + (n as f64 - 1.0) * libm::log(gamma)
            - rate * gamma
            - math::ln_factorial(n - 1),
    )
}

/// Exact average FER `∫ P(γ) f(γ) dγ` by quadrature.
pub fn mimo_exact_fer(cfg: &MimoConfig, spec: &ModulationSpec) -> Result<f64, Error> {
    let c = *cfg;
    fer::average_fer_exact(move |g| mimo_snr_pdf(g, &c), spec)
}

/// Threshold-model average FER: the SNR CDF at the given threshold.
pub fn mimo_fer_approx(cfg: &MimoConfig, gamma_t: f64) -> f64 {
    mimo_snr_cdf(gamma_t, cfg)
}

/// The numerically optimal threshold: the `γ*` at which the outage form
/// reproduces the exact average FER, `F(γ*) = FER_exact`.
pub fn mimo_optimal_threshold(cfg: &MimoConfig, spec: &ModulationSpec) -> Result<f64, Error> {
    let target = mimo_exact_fer(cfg, spec)?;
    let mut lo = 1e-9 * cfg.avg_snr;
    let mut hi = 1e3 * cfg.avg_snr;
    for _ in 0..8 {
        let objective = |g: f64| mimo_snr_cdf(g, cfg) - target;
        match math::find_root_bracketed(objective, lo, hi, 1e-13 * cfg.avg_snr) {
            Ok(r) => return Ok(r),
            Err(Error::NoBracket) => {
                lo *= 1e-3;
                hi *= 1e3;
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::NoBracket)
}
