//! Seeded statistical checks: selection frequencies against the target
//! law, attempt counts against `bound · N / total`, calibration of the
//! chi-square test itself.

use roulette::stats::{run_attempt_test, run_frequency_test};
use roulette::{
    AcceptanceEngine, HybridEngine, LinearScanEngine, PrefixSumEngine, RandomSource, Selector,
    WeightTable,
};

fn uniform_unit_table(n: usize, seed: u64) -> WeightTable {
    let mut rng = RandomSource::new(seed);
    WeightTable::from_vec(
        (0..n)
            .map(|_| loop {
                let u = rng.uniform();
                if u > 0.0 {
                    break u;
                }
            })
            .collect(),
    )
    .unwrap()
}

#[test]
fn every_engine_matches_the_target_distribution() {
    let table = WeightTable::new(&[1.0, 2.0, 3.0, 4.0]).unwrap();
    let draws = 200_000;
    let target = [0.1, 0.2, 0.3, 0.4];

    let check = |name: &str, engine: &dyn Selector, seed: u64| {
        let report = run_frequency_test(engine, &table, draws, seed).unwrap();
        assert!(
            report.p_value > 1e-3,
            "{name}: p = {}, chi2 = {}",
            report.p_value,
            report.chi_square
        );
        for (i, (&c, &p)) in report.counts.iter().zip(&target).enumerate() {
            let f = c as f64 / draws as f64;
            assert!((f - p).abs() < 0.01, "{name} index {i}: {f} vs {p}");
        }
    };

    check("linear", &LinearScanEngine::new(), 101);
    check("binary", &PrefixSumEngine::new(&table), 102);
    check("acceptance", &AcceptanceEngine::new(), 103);
    check("hybrid", &HybridEngine::new(&table).unwrap(), 104);
}

#[test]
fn attempt_law_on_two_weights() {
    // bound·N/total = 3·2/4 = 1.5.
    let table = WeightTable::new(&[1.0, 3.0]).unwrap();
    let report = run_attempt_test(&AcceptanceEngine::new(), &table, 1_000_000, 21).unwrap();
    assert!(
        (report.mean_attempts - 1.5).abs() < 0.01,
        "mean attempts {}",
        report.mean_attempts
    );
    assert_eq!(report.predicted_tau, 1.5);
    // q = 1 - total/(N·max) = 1 - 4/6.
    assert!((report.predicted_q - 1.0 / 3.0).abs() < 1e-12);
    assert!(report.z_score.abs() < 4.0);
}

#[test]
fn attempt_law_on_uniform_unit_weights() {
    // max ~= 1 and mean ~= 1/2 for 1e4 uniform variates, so the expected
    // attempt count sits near 2.
    let table = uniform_unit_table(10_000, 8);
    let report = run_attempt_test(&AcceptanceEngine::new(), &table, 200_000, 22).unwrap();
    assert!(
        (report.mean_attempts - 2.0).abs() < 0.05,
        "mean attempts {}",
        report.mean_attempts
    );
    assert!(report.z_score.abs() < 4.0);
}

#[test]
fn equal_weights_never_reject() {
    let table = WeightTable::new(&[2.5; 100]).unwrap();
    let report = run_attempt_test(&AcceptanceEngine::new(), &table, 10_000, 23).unwrap();
    assert_eq!(report.mean_attempts, 1.0);
    assert_eq!(report.predicted_tau, 1.0);
    assert_eq!(report.predicted_q, 0.0);
    assert_eq!(report.std_error, 0.0);
}

#[test]
fn raising_the_bound_costs_attempts_but_not_accuracy() {
    let table = uniform_unit_table(1_000, 9);
    let max = table.max_bound();
    let mut last_mean = 0.0;
    for (i, factor) in [1.0, 1.5, 2.0].into_iter().enumerate() {
        let engine = AcceptanceEngine::with_bound(max * factor);
        let attempts = run_attempt_test(&engine, &table, 100_000, 31 + i as u64).unwrap();
        assert!(
            attempts.mean_attempts > last_mean,
            "attempts should grow with the bound: {} after {}",
            attempts.mean_attempts,
            last_mean
        );
        assert!(attempts.z_score.abs() < 4.0);
        last_mean = attempts.mean_attempts;

        let freq = run_frequency_test(&engine, &table, 100_000, 41 + i as u64).unwrap();
        assert!(freq.is_consistent(), "p = {}", freq.p_value);
    }
}

#[test]
fn frequency_test_calibration_on_exact_engine() {
    // The linear engine realizes the target law exactly, so p-values are
    // uniform: across 200 seeds, p < 0.01 should occur about 2 times.
    let table = WeightTable::new(&[0.5, 1.0, 2.0, 4.0, 2.0]).unwrap();
    let engine = LinearScanEngine::new();
    let mut rejections = 0;
    for seed in 0..200 {
        let report = run_frequency_test(&engine, &table, 2_000, seed).unwrap();
        if report.p_value < 0.01 {
            rejections += 1;
        }
    }
    assert!(
        rejections <= 7,
        "{rejections} of 200 exact-engine runs rejected at 0.01"
    );
}

#[test]
fn attempt_estimate_stays_within_four_standard_errors() {
    let table = WeightTable::new(&[0.2, 1.0, 0.7, 3.1, 2.2, 0.05]).unwrap();
    let engine = AcceptanceEngine::new();
    let mut outliers = 0;
    for seed in 0..100 {
        let report = run_attempt_test(&engine, &table, 10_000, 500 + seed).unwrap();
        if report.z_score.abs() > 4.0 {
            outliers += 1;
        }
    }
    assert!(outliers <= 1, "{outliers} of 100 runs beyond 4 sigma");
}

#[test]
fn hybrid_with_empty_heavy_set_matches_acceptance_distribution() {
    // 20 equal-ish weights: nothing crosses the 0.1 fraction, so the
    // hybrid runs pure acceptance and must pass the same frequency test.
    let table = uniform_unit_table(20, 10);
    let hybrid = HybridEngine::new(&table).unwrap();
    assert!(hybrid.heavy_indices().is_empty() || hybrid.heavy_indices().len() < 3);
    let report = run_frequency_test(&hybrid, &table, 200_000, 55).unwrap();
    assert!(report.is_consistent(), "p = {}", report.p_value);
}
