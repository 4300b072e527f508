//! Property-based invariants of the numeric and analytic layers.

use proptest::prelude::*;
use schcn_core::analytic::{build_schcn_cdf, schcn_cdf_asymptotic, CdfCase, RateParams, SchcnCdf};
use schcn_core::math;
use schcn_core::mimo::{mimo_snr_cdf, mimo_snr_pdf, MimoConfig};

/// Base rate of the repeated-pole group: `λ_eq` in the distinct case, `λ₀`
/// in the equal case.
fn base_rate(cdf: &SchcnCdf) -> f64 {
    match cdf.case {
        CdfCase::Distinct => cdf.rates.lambda_eq,
        CdfCase::Equal => cdf.rates.lambda_0,
    }
}

fn max_pole(cdf: &SchcnCdf) -> f64 {
    let m = cdf.n - cdf.n_c;
    let spread = (1.0 + m as f64 / cdf.n_c as f64) * base_rate(cdf);
    cdf.rates.lambda_0.max(spread)
}

/// Closed-form CDF reassembled in the test from the public coefficients,
/// together with the sum of absolute term magnitudes (the cancellation
/// scale that bounds the achievable absolute accuracy).
fn closed_form_with_scale(cdf: &SchcnCdf, gamma: f64) -> (f64, f64) {
    let nc = cdf.n_c as f64;
    let b = base_rate(cdf);
    let l0 = cdf.rates.lambda_0;
    let mut value = 0.0;
    let mut scale = 0.0;
    let mut fact = 1.0;
    for (idx, &ai) in cdf.alpha.iter().enumerate() {
        if idx > 0 {
            fact *= idx as f64;
        }
        let term = ai / fact * math::g_lower(idx as u32, b, gamma);
        value += term;
        scale += term.abs();
    }
    let term = cdf.beta0 / l0 * -(-l0 * gamma).exp_m1();
    value += term;
    scale += term.abs();
    for (idx, &bj) in cdf.beta.iter().enumerate() {
        let rate = (1.0 + (idx + 1) as f64 / nc) * b;
        let term = bj / rate * -(-rate * gamma).exp_m1();
        value += term;
        scale += term.abs();
    }
    (value, scale)
}

proptest! {
    #[test]
    fn q_function_symmetry(x in -8.0f64..8.0) {
        let s = math::q_function(x) + math::q_function(-x);
        prop_assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn q_function_monotone(x in -6.0f64..6.0, dx in 1e-6f64..2.0) {
        prop_assert!(math::q_function(x + dx) < math::q_function(x));
    }

    #[test]
    fn g_lower_scaling_identity(n in 0u32..8, beta in 0.05f64..20.0, x in 0.01f64..30.0) {
        // ∫₀ˣ tⁿe^{−βt}dt = β^{−(n+1)} ∫₀^{βx} uⁿe^{−u}du
        let lhs = math::g_lower(n, beta, x);
        let rhs = libm::pow(beta, -((n + 1) as f64)) * math::g_lower(n, 1.0, beta * x);
        prop_assert!((lhs - rhs).abs() <= 1e-16 + 1e-11 * rhs.abs(), "{lhs} vs {rhs}");
    }

    #[test]
    fn g_lower_monotone_in_x(n in 0u32..6, beta in 0.1f64..5.0, x in 0.01f64..10.0) {
        prop_assert!(math::g_lower(n, beta, 1.05 * x) >= math::g_lower(n, beta, x));
    }

    #[test]
    fn root_finder_swap_invariant(r in -3.0f64..3.0, w in 0.5f64..4.0) {
        let f = |x: f64| x - r;
        let a = math::find_root_bracketed(f, r - w, r + w, 1e-12).unwrap();
        let b = math::find_root_bracketed(f, r + w, r - w, 1e-12).unwrap();
        prop_assert_eq!(a.to_bits(), b.to_bits());
        prop_assert!((a - r).abs() < 1e-10);
    }

    #[test]
    fn mimo_pdf_normalizes(n_t in 1u32..3, n_r in 1u32..4, snr in 0.5f64..50.0) {
        let cfg = MimoConfig::new(n_t, n_r, snr);
        let spec = math::QuadratureSpec::new(1e-10, 1e-14, 100_000);
        let mass = math::integrate_semi_infinite(move |g| mimo_snr_pdf(g, &cfg), &spec).unwrap();
        prop_assert!((mass - 1.0).abs() < 1e-8, "{mass}");
    }

    #[test]
    fn mimo_cdf_axioms(n_t in 1u32..3, n_r in 1u32..4, snr in 0.5f64..50.0, g in 0.0f64..500.0) {
        let cfg = MimoConfig::new(n_t, n_r, snr);
        let f = mimo_snr_cdf(g, &cfg);
        prop_assert!((0.0..=1.0).contains(&f));
        prop_assert!(mimo_snr_cdf(g * 1.1 + 0.01, &cfg) >= f);
    }

    #[test]
    fn combiner_cdf_axioms(
        n in 1u32..7,
        n_c_off in 0u32..7,
        l0 in 0.05f64..5.0,
        lsr in 0.05f64..3.0,
        lrd in 0.05f64..3.0,
        g in 0.0f64..80.0,
    ) {
        let n_c = 1 + n_c_off % n;
        let rates = RateParams::new(l0, lsr, lrd);
        let cdf = build_schcn_cdf(n, n_c, &rates).unwrap();
        let f = cdf.eval(g);
        prop_assert!((0.0..=1.0).contains(&f), "F({g}) = {f}");
        prop_assert!(cdf.eval(g * 1.05 + 1e-3) + 1e-9 >= f);
    }

    #[test]
    fn laplace_transform_reassembles(
        n in 1u32..7,
        n_c_off in 0u32..7,
        l0 in 0.1f64..4.0,
        lsr in 0.1f64..2.0,
        lrd in 0.1f64..2.0,
        s in 0.01f64..30.0,
    ) {
        let n_c = 1 + n_c_off % n;
        let rates = RateParams::new(l0, lsr, lrd);
        let cdf = build_schcn_cdf(n, n_c, &rates).unwrap();
        let prod = cdf.laplace_product(s);
        let sum = cdf.laplace_partial_fractions(s);
        // Terms decaying like 1/s must cancel down to the product's s^{-(N+1)}
        // decay, so accuracy is relative to the largest term, not the result.
        let scale: f64 = cdf.alpha.iter().chain(cdf.beta.iter()).map(|c| c.abs() / s).sum::<f64>()
            + cdf.beta0.abs() / s;
        prop_assert!(
            (prod - sum).abs() <= 1e-6 * prod.abs() + 1e-11 * scale,
            "{prod} vs {sum}"
        );
    }

    #[test]
    fn series_and_closed_form_agree_at_switch(
        n in 1u32..6,
        n_c_off in 0u32..6,
        l0 in 0.2f64..3.0,
        lsr in 0.2f64..2.0,
        lrd in 0.2f64..2.0,
    ) {
        // Below the representation switch the evaluator uses a Taylor
        // series; it must agree with the partial-fraction closed form
        // reassembled here from the public coefficients, up to the
        // cancellation scale of the latter.
        let n_c = 1 + n_c_off % n;
        let rates = RateParams::new(l0, lsr, lrd);
        let cdf = build_schcn_cdf(n, n_c, &rates).unwrap();
        let g = 0.9 / max_pole(&cdf);
        let series = cdf.eval(g);
        let (closed, scale) = closed_form_with_scale(&cdf, g);
        prop_assert!(
            (series - closed).abs() <= 1e-8 * closed.abs() + 1e-12 * scale,
            "{series} vs {closed} (scale {scale})"
        );
    }

    #[test]
    fn asymptote_matches_small_gamma(
        n in 1u32..6,
        n_c_off in 0u32..6,
        l0 in 0.2f64..3.0,
        lsr in 0.2f64..2.0,
        lrd in 0.2f64..2.0,
    ) {
        let n_c = 1 + n_c_off % n;
        let rates = RateParams::new(l0, lsr, lrd);
        let cdf = build_schcn_cdf(n, n_c, &rates).unwrap();
        let p_max = l0.max((1.0 + (n - n_c) as f64 / n_c as f64) * (lsr + lrd));
        let g = 1e-3 / p_max;
        let ratio = cdf.eval(g) / schcn_cdf_asymptotic(n, n_c, &rates, g);
        prop_assert!((ratio - 1.0).abs() < 5e-3, "{ratio}");
    }
}
