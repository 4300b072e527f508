//! Monte Carlo and reference-value oracle checks for the analytic layer.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use schcn_core::analytic::{build_schcn_cdf, relay_link_cdf_at, RateParams};
use schcn_core::fer::{snr_threshold_proposed, ModulationSpec};
use schcn_core::linear_to_db;

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
}

fn exponential(rng: &mut ChaCha8Rng, rate: f64) -> f64 {
    -(1.0 - uniform(rng)).ln() / rate
}

/// One-sample Kolmogorov-Smirnov statistic of `samples` against `cdf`.
fn ks_statistic<F: Fn(f64) -> f64>(samples: &mut [f64], cdf: F) -> f64 {
    samples.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let n = samples.len() as f64;
    let mut sup: f64 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        sup = sup.max(((i + 1) as f64 / n - f).abs());
        sup = sup.max((f - i as f64 / n).abs());
    }
    sup
}

#[test]
fn relay_link_cdf_matches_sampled_model() {
    // Sample the variable the piecewise CDF describes: the relay forwards
    // the relay-destination SNR when it decodes (source-relay SNR above
    // the order-1 threshold), otherwise the min of the two hop SNRs.
    let spec = ModulationSpec::bpsk(100);
    let gt1 = snr_threshold_proposed(1, &spec).unwrap();
    let rates = RateParams::new(1.0, 0.8, 1.3);
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    let n = 200_000;
    let mut samples: Vec<f64> = (0..n)
        .map(|_| {
            let g_sr = exponential(&mut rng, rates.lambda_sr);
            let g_rd = exponential(&mut rng, rates.lambda_rd);
            if g_sr >= gt1 {
                g_rd
            } else {
                g_sr.min(g_rd)
            }
        })
        .collect();
    let ks = ks_statistic(&mut samples, |x| relay_link_cdf_at(x, &rates, gt1));
    assert!(ks < 0.005, "KS = {ks}");
}

#[test]
fn combiner_cdf_matches_order_statistic_sampling() {
    // Direct exponential plus the sum of the largest n_c of n i.i.d.
    // equivalent-rate exponentials.
    for (n_rel, n_c, l0, le) in [(3u32, 2u32, 0.9, 1.4), (4, 1, 1.2, 0.7), (2, 2, 0.5, 0.5)] {
        let mut rates = RateParams::new(l0, 0.5 * le, 0.5 * le);
        rates.lambda_eq = le;
        let cdf = build_schcn_cdf(n_rel, n_c, &rates).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(987 + n_rel as u64);
        let n = 200_000;
        let mut samples: Vec<f64> = (0..n)
            .map(|_| {
                let mut relays: Vec<f64> =
                    (0..n_rel).map(|_| exponential(&mut rng, le)).collect();
                relays.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap());
                exponential(&mut rng, l0) + relays[..n_c as usize].iter().sum::<f64>()
            })
            .collect();
        let ks = ks_statistic(&mut samples, |x| cdf.eval(x));
        assert!(ks < 0.005, "n={n_rel} n_c={n_c}: KS = {ks}");
    }
}

#[test]
fn effective_relay_snr_matches_link_cdf_in_threshold_mode() {
    // High mean SNR, where the min-SNR approximation underlying the link
    // CDF is tight against the exact amplify-and-forward effective SNR.
    use schcn_core::sim::{classify_relay, effective_relay_snr, CrcMode};
    let spec = ModulationSpec::bpsk(100);
    let gt1 = snr_threshold_proposed(1, &spec).unwrap();
    let mean = 100.0;
    let rates = RateParams::new(1.0, 1.0 / mean, 1.0 / mean);
    let mut rng = ChaCha8Rng::seed_from_u64(777);
    let n = 100_000;
    let mut samples: Vec<f64> = (0..n)
        .map(|_| {
            let g1 = exponential(&mut rng, rates.lambda_sr);
            let g2 = exponential(&mut rng, rates.lambda_rd);
            let protocol = classify_relay(g1, &spec, CrcMode::Threshold, gt1, &mut rng);
            effective_relay_snr(g1, g2, protocol)
        })
        .collect();
    let ks = ks_statistic(&mut samples, |x| relay_link_cdf_at(x, &rates, gt1));
    assert!(ks < 0.01, "KS = {ks}");
}

#[test]
fn threshold_table_reference_values() {
    // Reference decibel values for BPSK; proposed thresholds by diversity
    // order and frame length.
    let rows = [
        (1u32, 100u32, 5.10),
        (2, 100, 5.36),
        (3, 100, 5.62),
        (4, 100, 5.89),
        (4, 200, 6.45),
        (4, 400, 6.97),
    ];
    for (d, l, db) in rows {
        let t = snr_threshold_proposed(d, &ModulationSpec::bpsk(l)).unwrap();
        assert!(
            (linear_to_db(t) - db).abs() < 0.02,
            "d={d} L={l}: {} vs {db}",
            linear_to_db(t)
        );
    }
    let t = snr_threshold_proposed(1, &ModulationSpec::bpsk(100)).unwrap();
    assert!((t - 3.23622).abs() < 5e-4);
    let t = snr_threshold_proposed(4, &ModulationSpec::bpsk(100)).unwrap();
    assert!((t - 3.88115).abs() < 5e-4);
}
