//! Closed-form CDF and FER analysis of the selective-combining hybrid
//! relay network.
//!
//! The combiner output is `γ₀ + Σ top-N_c of {γ_i}`, where `γ₀ ~ Exp(λ₀)`
//! is the direct link and the effective relay SNRs are approximated as
//! i.i.d. `Exp(λ_eq)`. Its Laplace transform is a rational function whose
//! partial-fraction expansion yields the closed-form CDF; the leading term
//! of the transform at large `s` yields the high-SNR asymptote.
//!
//! Three evaluation paths back [`SchcnCdf::eval`]:
//!
//! * the partial-fraction closed form (the general case);
//! * a Taylor series in `γ` for small arguments, where the closed form
//!   cancels to noise (the CDF starts at order `γ^{N+1}`);
//! * a convolution quadrature when `λ₀` sits close to the `λ_eq` pole
//!   family, where the partial-fraction coefficients blow up as
//!   `(λ_eq − λ₀)^{−N_c}` and destroy double precision.

use crate::fer::{self, ModulationSpec};
use crate::math::{self, factorial, QuadratureSpec};
use crate::Error;
use alloc::vec;
use alloc::vec::Vec;

/// Relative rate gap below which `λ₀` and `λ_eq` are treated as equal.
pub const EQUAL_RATE_TOL: f64 = 1e-6;

/// Relative rate gap below which the distinct-case closed form is replaced
/// by the convolution fallback.
const NEAR_DEGENERATE_TOL: f64 = 1e-3;

/// Largest relay count the coefficient builder accepts; beyond this the
/// factorial growth in the expansion coefficients makes the closed form
/// unreliable in double precision.
pub const MAX_RELAYS: u32 = 10;

/// Which end of the equivalent-rate interval to use for `λ_eq`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaEqMode {
    /// `λ_eq = λ_sr + λ_rd` (the default used throughout the experiments).
    UpperBound,
    /// `λ_eq = λ_sr·γ_{t,1}/γ_{t,d} + λ_rd` for the given diversity order.
    LowerBound { d: u32 },
}

/// Exponential rate parameters of the direct, source-relay and
/// relay-destination links plus the derived equivalent hybrid-link rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateParams {
    pub lambda_0: f64,
    pub lambda_sr: f64,
    pub lambda_rd: f64,
    pub lambda_eq: f64,
    pub mode: LambdaEqMode,
}

impl RateParams {
    /// Rates with `λ_eq` at its upper bound `λ_sr + λ_rd`.
    pub fn new(lambda_0: f64, lambda_sr: f64, lambda_rd: f64) -> Self {
        assert!(lambda_0 > 0.0 && lambda_sr >= 0.0 && lambda_rd > 0.0);
        RateParams {
            lambda_0,
            lambda_sr,
            lambda_rd,
            lambda_eq: lambda_sr + lambda_rd,
            mode: LambdaEqMode::UpperBound,
        }
    }

    /// Rates with `λ_eq` at its lower bound for diversity order `d`.
    pub fn with_lower_bound(
        lambda_0: f64,
        lambda_sr: f64,
        lambda_rd: f64,
        d: u32,
        spec: &ModulationSpec,
    ) -> Result<Self, Error> {
        let (lower, _) = lambda_eq_bounds(lambda_sr, lambda_rd, d, spec)?;
        let mut rates = RateParams::new(lambda_0, lambda_sr, lambda_rd);
        rates.lambda_eq = lower;
        rates.mode = LambdaEqMode::LowerBound { d };
        Ok(rates)
    }
}

/// Bounds of the equivalent hybrid-link rate:
/// `(λ_sr·γ_{t,1}/γ_{t,d} + λ_rd, λ_sr + λ_rd)`.
pub fn lambda_eq_bounds(
    lambda_sr: f64,
    lambda_rd: f64,
    d: u32,
    spec: &ModulationSpec,
) -> Result<(f64, f64), Error> {
    let gt1 = fer::snr_threshold_proposed(1, spec)?;
    let gtd = fer::snr_threshold_proposed(d, spec)?;
    Ok((lambda_sr * gt1 / gtd + lambda_rd, lambda_sr + lambda_rd))
}

/// CDF of the end-to-end SNR through one hybrid AF/DF relay.
///
/// Piecewise with a branch at `γ_{t,1}`: below it the relay is in the AF
/// group and the min-SNR approximation gives rate `λ_sr + λ_rd`; above it
/// only the relay-destination hop matters, weighted by the probability
/// `e^{−λ_sr γ_{t,1}}` of correct decoding.
pub fn relay_link_cdf(gamma: f64, rates: &RateParams, spec: &ModulationSpec) -> Result<f64, Error> {
    let gt1 = fer::snr_threshold_proposed(1, spec)?;
    Ok(relay_link_cdf_at(gamma, rates, gt1))
}

/// [`relay_link_cdf`] with a precomputed `γ_{t,1}`, for use in loops.
pub fn relay_link_cdf_at(gamma: f64, rates: &RateParams, gamma_t1: f64) -> f64 {
    if gamma <= 0.0 {
        return 0.0;
    }
    if gamma < gamma_t1 {
        -libm::expm1(-(rates.lambda_sr + rates.lambda_rd) * gamma)
    } else {
        1.0 - libm::exp(-rates.lambda_sr * gamma_t1 - rates.lambda_rd * gamma)
    }
}

/// Which partial-fraction expansion applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdfCase {
    Distinct,
    Equal,
}

/// Evaluated closed-form CDF of the combiner output SNR, coefficients
/// precomputed at construction. Immutable and freely shareable.
#[derive(Debug, Clone)]
pub struct SchcnCdf {
    pub n: u32,
    pub n_c: u32,
    pub rates: RateParams,
    pub case: CdfCase,
    /// `α_i` (distinct, `i = 1..=N_c`) or `α*_i` (equal, `i = 1..=N_c+1`).
    pub alpha: Vec<f64>,
    /// `β₀` (distinct case only; 0 in the equal case).
    pub beta0: f64,
    /// `β_j` or `β*_j`, `j = 1..=N−N_c`.
    pub beta: Vec<f64>,
    /// `θ₀` (distinct case).
    pub theta0: f64,
    /// `θ_k` or `θ*_k`, `k = 1..=N−N_c`.
    pub theta: Vec<f64>,
    /// Leading constant `c` or `c*`.
    pub lead: f64,
    /// All transform poles with multiplicity, for the series path.
    poles: Vec<f64>,
    pole_max: f64,
    /// Use the convolution fallback instead of the distinct closed form.
    near_degenerate: bool,
    /// Partial fractions of the relay-sum PDF alone (fallback path).
    coop: CoopPdf,
}

/// Partial-fraction form of the PDF of the selected relay sum.
#[derive(Debug, Clone)]
struct CoopPdf {
    lambda_eq: f64,
    n_c: u32,
    /// Coefficients of `t^{i−1} e^{−λ_eq t}/(i−1)!`, `i = 1..=N_c`.
    a: Vec<f64>,
    /// Coefficients of `e^{−(1+j/N_c)λ_eq t}`, `j = 1..=N−N_c`.
    b: Vec<f64>,
    poles: Vec<f64>,
    pole_max: f64,
}

impl CoopPdf {
    fn build(n: u32, n_c: u32, lambda_eq: f64) -> CoopPdf {
        let m = n - n_c;
        let lead = factorial(n) / (factorial(n_c) * libm::pow(n_c as f64, m as f64))
            * libm::pow(lambda_eq, n as f64);
        let nc = n_c as f64;
        // Residues of 1/∏(s + (1 + n/N_c)λ_eq) at its own poles.
        let mut t = vec![0.0f64; m as usize + 1];
        for k in 1..=m {
            let mut v = 1.0;
            for j in 1..=m {
                if j != k {
                    v /= (j as f64 - k as f64) / nc * lambda_eq;
                }
            }
            t[k as usize] = v;
        }
        let mut a = vec![0.0f64; n_c as usize];
        if m == 0 {
            // Pure Erlang(N_c, λ_eq): single top-order term.
            a[n_c as usize - 1] = lead;
        } else {
            for i in 1..=n_c {
                let ord = (n_c - i) as i32; // derivative order
                let mut s = 0.0;
                for k in 1..=m {
                    s += t[k as usize] / libm::pow(k as f64 / nc * lambda_eq, (ord + 1) as f64);
                }
                a[i as usize - 1] = lead * sign_pow(ord) * s;
            }
        }
        let mut b = vec![0.0f64; m as usize];
        for j in 1..=m {
            b[j as usize - 1] =
                lead * t[j as usize] / libm::pow(-(j as f64) / nc * lambda_eq, nc);
        }
        let mut poles = vec![lambda_eq; n_c as usize];
        for j in 1..=m {
            poles.push((1.0 + j as f64 / nc) * lambda_eq);
        }
        let pole_max = poles.iter().fold(0.0f64, |acc, &p| acc.max(p));
        CoopPdf {
            lambda_eq,
            n_c,
            a,
            b,
            poles,
            pole_max,
        }
    }

    /// PDF of the relay sum, with a series fallback at small `t` where the
    /// partial-fraction terms cancel.
    fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t * self.pole_max <= 1.0 {
            return pdf_series(&self.poles, t);
        }
        let le = self.lambda_eq;
        let nc = self.n_c as f64;
        let mut f = 0.0;
        let mut poly = 1.0; // t^{i-1}/(i-1)!
        let decay = libm::exp(-le * t);
        for (idx, &ai) in self.a.iter().enumerate() {
            if idx > 0 {
                poly *= t / idx as f64;
            }
            f += ai * poly * decay;
        }
        for (idx, &bj) in self.b.iter().enumerate() {
            let j = (idx + 1) as f64;
            f += bj * libm::exp(-(1.0 + j / nc) * le * t);
        }
        f.max(0.0)
    }
}

fn sign_pow(m: i32) -> f64 {
    if m % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Complete homogeneous symmetric polynomials `h_0..h_terms` of the pole
/// multiset, via the power-sum recurrence `j·h_j = Σ_k p_k·h_{j−k}`.
fn homogeneous_sums(poles: &[f64], terms: usize) -> Vec<f64> {
    let mut pow_sums = vec![0.0f64; terms + 1];
    for (k, ps) in pow_sums.iter_mut().enumerate().skip(1) {
        *ps = poles.iter().map(|&p| libm::pow(p, k as f64)).sum();
    }
    let mut h = vec![0.0f64; terms + 1];
    h[0] = 1.0;
    for j in 1..=terms {
        let mut acc = 0.0;
        for k in 1..=j {
            acc += pow_sums[k] * h[j - k];
        }
        h[j] = acc / j as f64;
    }
    h
}

/// Taylor series of the CDF whose PDF transform is `∏ p_k/(s + p_k)`:
/// `F(γ) = (∏p_k) Σ_j (−1)^j h_j γ^{M+j}/(M+j)!` with `M = #poles`.
fn cdf_series(poles: &[f64], gamma: f64) -> f64 {
    let m = poles.len();
    let lead: f64 = poles.iter().product();
    let h = homogeneous_sums(poles, 90);
    let mut term = libm::pow(gamma, m as f64);
    for k in 1..=m {
        term /= k as f64;
    }
    let mut total = 0.0;
    for (j, &hj) in h.iter().enumerate() {
        let t = sign_pow(j as i32) * hj * term;
        total += t;
        if libm::fabs(t) < 1e-18 * libm::fabs(total) {
            break;
        }
        term *= gamma / (m + j + 1) as f64;
    }
    (lead * total).max(0.0)
}

/// Same series for the PDF (`M − 1` leading power).
fn pdf_series(poles: &[f64], t: f64) -> f64 {
    let m = poles.len();
    let lead: f64 = poles.iter().product();
    let h = homogeneous_sums(poles, 90);
    let mut term = libm::pow(t, (m - 1) as f64);
    for k in 1..m {
        term /= k as f64;
    }
    let mut total = 0.0;
    for (j, &hj) in h.iter().enumerate() {
        let tj = sign_pow(j as i32) * hj * term;
        total += tj;
        if libm::fabs(tj) < 1e-18 * libm::fabs(total) {
            break;
        }
        term *= t / (m + j) as f64;
    }
    (lead * total).max(0.0)
}

/// Build the closed-form CDF of `γ₀ + Σ top-N_c` for the given rates.
pub fn build_schcn_cdf(n: u32, n_c: u32, rates: &RateParams) -> Result<SchcnCdf, Error> {
    if n == 0 || n_c == 0 || n_c > n {
        return Err(Error::InvalidConfig("require 1 <= n_c <= n"));
    }
    if n > MAX_RELAYS {
        return Err(Error::DegenerateRates);
    }
    let l0 = rates.lambda_0;
    let le = rates.lambda_eq;
    if !(l0 > 0.0 && le > 0.0) {
        return Err(Error::InvalidConfig("rates must be positive"));
    }
    let m = n - n_c;
    let nc = n_c as f64;
    let equal = libm::fabs(l0 - le) <= EQUAL_RATE_TOL * le;
    // λ₀ colliding with one of the (1 + j/N_c)λ_eq poles is not covered by
    // either expansion.
    if !equal {
        for j in 1..=m {
            let pj = (1.0 + j as f64 / nc) * le;
            if libm::fabs(l0 - pj) <= EQUAL_RATE_TOL * pj {
                return Err(Error::DegenerateRates);
            }
        }
    }

    let coop = CoopPdf::build(n, n_c, le);
    let mut poles;
    let case;
    let mut alpha;
    let mut beta0 = 0.0;
    let mut beta = vec![0.0f64; m as usize];
    let mut theta = vec![0.0f64; m as usize];
    let mut theta0 = 0.0;
    let lead;
    let mut near_degenerate = false;

    if equal {
        case = CdfCase::Equal;
        lead = factorial(n) / (factorial(n_c) * libm::pow(nc, m as f64))
            * libm::pow(l0, (n + 1) as f64);
        alpha = vec![0.0f64; n_c as usize + 1];
        if m == 0 {
            // Footnote reduction: pure Erlang(N+1, λ₀).
            alpha[n_c as usize] = lead;
        } else {
            for k in 1..=m {
                let mut v = 1.0;
                for j in 1..=m {
                    if j != k {
                        v /= (j as f64 - k as f64) / nc * l0;
                    }
                }
                theta[k as usize - 1] = v;
            }
            for i in 1..=(n_c + 1) {
                let ord = (n_c + 1 - i) as i32;
                let mut s = 0.0;
                for k in 1..=m {
                    s += theta[k as usize - 1]
                        / libm::pow(k as f64 / nc * l0, (ord + 1) as f64);
                }
                alpha[i as usize - 1] = lead * sign_pow(ord) * s;
            }
            for j in 1..=m {
                beta[j as usize - 1] = lead * theta[j as usize - 1]
                    / libm::pow(-(j as f64) / nc * l0, nc + 1.0);
            }
        }
        poles = vec![l0; n_c as usize + 1];
        for j in 1..=m {
            poles.push((1.0 + j as f64 / nc) * l0);
        }
    } else {
        case = CdfCase::Distinct;
        near_degenerate = libm::fabs(l0 - le) < NEAR_DEGENERATE_TOL * le;
        lead = factorial(n) / (factorial(n_c) * libm::pow(nc, m as f64))
            * l0
            * libm::pow(le, n as f64);
        theta0 = 1.0;
        for j in 1..=m {
            theta0 /= (1.0 + j as f64 / nc) * le - l0;
        }
        for k in 1..=m {
            let mut v = 1.0 / (l0 - (1.0 + k as f64 / nc) * le);
            for j in 1..=m {
                if j != k {
                    v /= (j as f64 - k as f64) / nc * le;
                }
            }
            theta[k as usize - 1] = v;
        }
        alpha = vec![0.0f64; n_c as usize];
        for i in 1..=n_c {
            let ord = (n_c - i) as i32;
            let mut s = theta0 / libm::pow(l0 - le, (ord + 1) as f64);
            for k in 1..=m {
                s += theta[k as usize - 1] / libm::pow(k as f64 / nc * le, (ord + 1) as f64);
            }
            alpha[i as usize - 1] = lead * sign_pow(ord) * s;
        }
        beta0 = lead * theta0 / libm::pow(le - l0, nc);
        for j in 1..=m {
            beta[j as usize - 1] =
                lead * theta[j as usize - 1] / libm::pow(-(j as f64) / nc * le, nc);
        }
        poles = vec![l0];
        poles.extend(coop.poles.iter().copied());
    }
    let pole_max = poles.iter().fold(0.0f64, |acc, &p| acc.max(p));

    Ok(SchcnCdf {
        n,
        n_c,
        rates: *rates,
        case,
        alpha,
        beta0,
        beta,
        theta0,
        theta,
        lead,
        poles,
        pole_max,
        near_degenerate,
        coop,
    })
}

impl SchcnCdf {
    /// CDF of the combiner output SNR at `gamma`.
    pub fn eval(&self, gamma: f64) -> f64 {
        if gamma <= 0.0 {
            return 0.0;
        }
        if gamma * self.pole_max <= 1.0 {
            return clamp01(cdf_series(&self.poles, gamma));
        }
        if self.near_degenerate {
            return clamp01(self.eval_convolution(gamma));
        }
        clamp01(self.eval_closed_form(gamma))
    }

    fn eval_closed_form(&self, gamma: f64) -> f64 {
        let nc = self.n_c as f64;
        match self.case {
            CdfCase::Distinct => {
                let le = self.rates.lambda_eq;
                let l0 = self.rates.lambda_0;
                let mut f = 0.0;
                for (idx, &ai) in self.alpha.iter().enumerate() {
                    let i = (idx + 1) as u32;
                    f += ai / factorial(i - 1) * math::g_lower(i - 1, le, gamma);
                }
                f += self.beta0 / l0 * -libm::expm1(-l0 * gamma);
                for (idx, &bj) in self.beta.iter().enumerate() {
                    let rate = (1.0 + (idx + 1) as f64 / nc) * le;
                    f += bj / rate * -libm::expm1(-rate * gamma);
                }
                f
            }
            CdfCase::Equal => {
                let l0 = self.rates.lambda_0;
                let mut f = 0.0;
                for (idx, &ai) in self.alpha.iter().enumerate() {
                    let i = (idx + 1) as u32;
                    f += ai / factorial(i - 1) * math::g_lower(i - 1, l0, gamma);
                }
                for (idx, &bj) in self.beta.iter().enumerate() {
                    let rate = (1.0 + (idx + 1) as f64 / nc) * l0;
                    f += bj / rate * -libm::expm1(-rate * gamma);
                }
                f
            }
        }
    }

    /// Stable route for `λ₀ ≈ λ_eq`: convolve the relay-sum PDF (whose own
    /// poles are well separated) with the direct-link exponential by
    /// quadrature, so no `(λ_eq − λ₀)^{−N_c}` factor ever appears.
    fn eval_convolution(&self, gamma: f64) -> f64 {
        let l0 = self.rates.lambda_0;
        let quad = QuadratureSpec::new(1e-10, 1e-14, 60_000);
        let coop = &self.coop;
        let integrand = move |t: f64| coop.eval(t) * -libm::expm1(-l0 * (gamma - t));
        math::integrate(integrand, 0.0, gamma, &quad).unwrap_or(f64::NAN)
    }

    /// High-SNR asymptote `λ₀ λ_eq^N γ^{N+1} / ((N+1)·N_c!·N_c^{N−N_c})`.
    pub fn asymptotic(&self, gamma: f64) -> f64 {
        schcn_cdf_asymptotic(self.n, self.n_c, &self.rates, gamma)
    }

    /// Product-form Laplace transform of the PDF, for identity checks.
    pub fn laplace_product(&self, s: f64) -> f64 {
        let l0 = self.rates.lambda_0;
        let le = match self.case {
            CdfCase::Distinct => self.rates.lambda_eq,
            CdfCase::Equal => l0,
        };
        let nc = self.n_c as f64;
        let m = self.n - self.n_c;
        let mut num = factorial(self.n) / (factorial(self.n_c) * libm::pow(nc, m as f64))
            * l0
            * libm::pow(le, self.n as f64);
        num /= libm::pow(s + le, nc) * (s + l0);
        for j in 1..=m {
            num /= s + (1.0 + j as f64 / nc) * le;
        }
        num
    }

    /// Reassembled partial-fraction Laplace transform of the PDF.
    pub fn laplace_partial_fractions(&self, s: f64) -> f64 {
        let nc = self.n_c as f64;
        match self.case {
            CdfCase::Distinct => {
                let le = self.rates.lambda_eq;
                let l0 = self.rates.lambda_0;
                let mut v = 0.0;
                for (idx, &ai) in self.alpha.iter().enumerate() {
                    v += ai / libm::pow(s + le, (idx + 1) as f64);
                }
                v += self.beta0 / (s + l0);
                for (idx, &bj) in self.beta.iter().enumerate() {
                    v += bj / (s + (1.0 + (idx + 1) as f64 / nc) * le);
                }
                v
            }
            CdfCase::Equal => {
                let l0 = self.rates.lambda_0;
                let mut v = 0.0;
                for (idx, &ai) in self.alpha.iter().enumerate() {
                    v += ai / libm::pow(s + l0, (idx + 1) as f64);
                }
                for (idx, &bj) in self.beta.iter().enumerate() {
                    v += bj / (s + (1.0 + (idx + 1) as f64 / nc) * l0);
                }
                v
            }
        }
    }
}

fn clamp01(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// High-SNR asymptotic CDF of the combiner output:
/// `λ₀ λ_eq^N γ^{N+1} / ((N+1)·N_c!·N_c^{N−N_c})`.
pub fn schcn_cdf_asymptotic(n: u32, n_c: u32, rates: &RateParams, gamma: f64) -> f64 {
    if gamma <= 0.0 {
        return 0.0;
    }
    if n == 0 || n_c == 0 {
        return rates.lambda_0 * gamma;
    }
    let denom = (n + 1) as f64 * factorial(n_c) * libm::pow(n_c as f64, (n - n_c) as f64);
    rates.lambda_0 * libm::pow(rates.lambda_eq, n as f64) * libm::pow(gamma, (n + 1) as f64)
        / denom
}

/// Closed-form average FER: the combiner CDF at the diversity-matched
/// threshold `γ_{t,N+1}`. `n = 0` or `n_c = 0` degenerates to direct
/// transmission, an exponential outage at `γ_{t,1}`.
pub fn fer_closed_form(
    n: u32,
    n_c: u32,
    rates: &RateParams,
    spec: &ModulationSpec,
) -> Result<f64, Error> {
    if n == 0 || n_c == 0 {
        let gt1 = fer::snr_threshold_proposed(1, spec)?;
        return Ok(-libm::expm1(-rates.lambda_0 * gt1));
    }
    let gtd = fer::snr_threshold_proposed(n + 1, spec)?;
    let cdf = build_schcn_cdf(n, n_c, rates)?;
    Ok(cdf.eval(gtd))
}

/// Asymptotic average FER `λ₀ λ_eq^N γ_{t,N+1}^{N+1} / ((N+1)·N_c!·N_c^{N−N_c})`;
/// its monomial degree `N+1` is the achieved diversity order.
pub fn fer_asymptotic(
    n: u32,
    n_c: u32,
    rates: &RateParams,
    spec: &ModulationSpec,
) -> Result<f64, Error> {
    let d = if n == 0 || n_c == 0 { 1 } else { n + 1 };
    let gtd = fer::snr_threshold_proposed(d, spec)?;
    Ok(schcn_cdf_asymptotic(n, n_c, rates, gtd))
}
