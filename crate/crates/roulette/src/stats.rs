//! Statistical verification utilities.
//!
//! Two questions come up for every engine: does the empirical selection
//! frequency match the target distribution, and does the attempt count
//! match the `bound · N / total` law. [`run_frequency_test`] answers the
//! first with a chi-square goodness-of-fit test plus total variation
//! distance, [`run_attempt_test`] the second with a z-score against the
//! predicted mean. Both are deterministic functions of their seed.
//!
//! "Statistically the same" is operationalized as: chi-square p-value
//! above `1e-3` *and* total variation below `5 · sqrt(N / draws)`. The two
//! criteria are complementary — chi-square is sensitive to shape errors in
//! well-populated cells, total variation to aggregate mass displacement.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::selectors::Selector;
use crate::table::WeightTable;

/// Default p-value floor for "the distributions agree".
pub const P_VALUE_FLOOR: f64 = 1e-3;

/// Default total-variation ceiling for a table of `n` cells observed over
/// `draws` samples.
pub fn total_variation_ceiling(n: usize, draws: u64) -> f64 {
    5.0 * (n as f64 / draws as f64).sqrt()
}

/// Outcome of a frequency (goodness-of-fit) test.
#[derive(Debug, Clone, Serialize)]
pub struct FrequencyReport {
    /// Observed draw count per index.
    pub counts: Vec<u64>,
    pub total_draws: u64,
    pub chi_square: f64,
    /// Buckets entering the statistic minus one, after pooling.
    pub degrees_of_freedom: usize,
    /// Upper-tail chi-square probability; 1.0 for the degenerate
    /// single-bucket case.
    pub p_value: f64,
    /// Half the L1 distance between empirical and target distribution,
    /// over all indices (no pooling).
    pub total_variation: f64,
}

impl FrequencyReport {
    /// The default agreement criterion (see module docs).
    pub fn is_consistent(&self) -> bool {
        self.p_value > P_VALUE_FLOOR
            && self.total_variation < total_variation_ceiling(self.counts.len(), self.total_draws)
    }
}

/// Outcome of an attempt-count test against the acceptance law.
#[derive(Debug, Clone, Serialize)]
pub struct AttemptReport {
    pub mean_attempts: f64,
    pub std_error: f64,
    /// Predicted mean attempts, `bound · N / total` for acceptance
    /// engines, exactly 1 for search engines.
    pub predicted_tau: f64,
    /// Predicted per-proposal rejection probability, `1 - 1/tau`.
    pub predicted_q: f64,
    pub z_score: f64,
}

/// Draw `draws` times with `engine` and test the observed index
/// frequencies against the table's target distribution.
///
/// Requires `draws >= 10 · N` so the chi-square buckets are populated.
pub fn run_frequency_test<S: Selector + ?Sized>(
    engine: &S,
    table: &WeightTable,
    draws: u64,
    seed: u64,
) -> Result<FrequencyReport> {
    let required = 10 * table.len() as u64;
    if draws < required {
        return Err(Error::InsufficientDraws {
            requested: draws,
            required,
        });
    }
    let probs = table.target_distribution()?;
    let mut rng = RandomSource::new(seed);
    let mut counts = vec![0u64; table.len()];
    for _ in 0..draws {
        counts[engine.select(table, &mut rng)?.index] += 1;
    }
    frequency_report(&counts, &probs)
}

/// Build a [`FrequencyReport`] from observed counts and target
/// probabilities. Useful when the counts come from a sampler whose target
/// is not the plain table distribution (cut-off, first-draw marginals).
///
/// Indices with expected count below 5 are pooled into a single bucket;
/// buckets still under 5 after pooling are dropped from the statistic.
pub fn frequency_report(counts: &[u64], probs: &[f64]) -> Result<FrequencyReport> {
    if counts.len() != probs.len() {
        return Err(Error::InvalidParameter(format!(
            "counts ({}) and probabilities ({}) differ in length",
            counts.len(),
            probs.len()
        )));
    }
    let total_draws: u64 = counts.iter().sum();
    let n = total_draws as f64;

    let mut chi_square = 0.0;
    let mut buckets = 0usize;
    let mut pooled_observed = 0.0;
    let mut pooled_expected = 0.0;
    let mut total_variation = 0.0;
    for (&c, &p) in counts.iter().zip(probs) {
        let observed = c as f64;
        let expected = p * n;
        total_variation += (observed / n - p).abs();
        if expected >= 5.0 {
            let diff = observed - expected;
            chi_square += diff * diff / expected;
            buckets += 1;
        } else if p > 0.0 {
            pooled_observed += observed;
            pooled_expected += expected;
        }
    }
    if pooled_expected >= 5.0 {
        let diff = pooled_observed - pooled_expected;
        chi_square += diff * diff / pooled_expected;
        buckets += 1;
    }
    total_variation *= 0.5;

    let (degrees_of_freedom, p_value) = if buckets >= 2 {
        let dof = buckets - 1;
        (dof, chi_square_p_value(chi_square, dof)?)
    } else {
        // All mass in one bucket: nothing to test, trivially consistent.
        (0, 1.0)
    };

    Ok(FrequencyReport {
        counts: counts.to_vec(),
        total_draws,
        chi_square,
        degrees_of_freedom,
        p_value,
        total_variation,
    })
}

/// Draw `draws` times and compare the mean attempt count against the
/// engine's predicted value. Requires `draws >= 10_000`.
pub fn run_attempt_test<S: Selector + ?Sized>(
    engine: &S,
    table: &WeightTable,
    draws: u64,
    seed: u64,
) -> Result<AttemptReport> {
    const REQUIRED: u64 = 10_000;
    if draws < REQUIRED {
        return Err(Error::InsufficientDraws {
            requested: draws,
            required: REQUIRED,
        });
    }
    let mut rng = RandomSource::new(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..draws {
        let a = engine.select(table, &mut rng)?.attempts as f64;
        sum += a;
        sum_sq += a * a;
    }
    let n = draws as f64;
    let mean_attempts = sum / n;
    let variance = ((sum_sq - n * mean_attempts * mean_attempts) / (n - 1.0)).max(0.0);
    let std_error = (variance / n).sqrt();
    let predicted_tau = engine.expected_attempts(table);
    let predicted_q = 1.0 - 1.0 / predicted_tau;
    let diff = mean_attempts - predicted_tau;
    let z_score = if diff == 0.0 { 0.0 } else { diff / std_error };
    Ok(AttemptReport {
        mean_attempts,
        std_error,
        predicted_tau,
        predicted_q,
        z_score,
    })
}

/// Upper-tail probability of the chi-square distribution with `dof`
/// degrees of freedom, via the regularized incomplete gamma function.
/// Absolute error below 1e-8 over the tested range.
pub fn chi_square_p_value(statistic: f64, dof: usize) -> Result<f64> {
    if dof < 1 {
        return Err(Error::InvalidDof);
    }
    if !statistic.is_finite() || statistic < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "chi-square statistic must be finite and non-negative, got {statistic}"
        )));
    }
    Ok(reg_gamma_upper(dof as f64 / 2.0, statistic / 2.0))
}

const GAMMA_EPS: f64 = 1e-10;
const GAMMA_MAX_ITER: usize = 100_000;

fn ln_gamma(x: f64) -> f64 {
    // Lanczos approximation, ~1e-10 relative accuracy for x > 0.
    const COEFFS: [f64; 6] = [
        76.18009172947146,
        -86.50532032941677,
        24.01409824083091,
        -1.231739572450155,
        0.1208650973866179e-2,
        -0.5395239384953e-5,
    ];
    let mut tmp = x + 5.5;
    tmp -= (x + 0.5) * tmp.ln();
    let mut ser = 1.000000000190015;
    for (j, &c) in COEFFS.iter().enumerate() {
        ser += c / (x + 1.0 + j as f64);
    }
    -tmp + (2.5066282746310005 * ser / x).ln()
}

/// Regularized upper incomplete gamma Q(a, x): series for x < a + 1,
/// continued fraction otherwise.
fn reg_gamma_upper(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - gamma_series_p(a, x)
    } else {
        gamma_cf_q(a, x)
    }
}

fn gamma_series_p(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    for n in 1..GAMMA_MAX_ITER {
        term *= x / (a + n as f64);
        sum += term;
        if term.abs() < sum.abs() * GAMMA_EPS {
            break;
        }
    }
    sum * (-x + a * x.ln() - ln_gamma(a)).exp()
}

fn gamma_cf_q(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..GAMMA_MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < GAMMA_EPS {
            break;
        }
    }
    (-x + a * x.ln() - ln_gamma(a)).exp() * h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selectors::LinearScanEngine;

    #[test]
    fn zero_statistic_gives_certainty() {
        for dof in [1, 2, 5, 100] {
            assert_eq!(chi_square_p_value(0.0, dof).unwrap(), 1.0);
        }
    }

    #[test]
    fn classic_table_values() {
        // Frozen from the quadrature oracle in tests/chi_square_oracle.rs.
        let p = chi_square_p_value(3.841, 1).unwrap();
        assert!((p - 0.050).abs() < 0.001, "p = {p}");
        let p = chi_square_p_value(2.706, 1).unwrap();
        assert!((p - 0.100).abs() < 0.001, "p = {p}");
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert_eq!(chi_square_p_value(1.0, 0).unwrap_err(), Error::InvalidDof);
        assert!(chi_square_p_value(-1.0, 1).is_err());
        assert!(chi_square_p_value(f64::NAN, 1).is_err());
    }

    #[test]
    fn median_is_near_dof_for_large_dof() {
        // Median of chi-square(k) is about k(1 - 2/(9k))^3.
        for dof in [10usize, 100, 1000, 9999] {
            let k = dof as f64;
            let median = k * (1.0 - 2.0 / (9.0 * k)).powi(3);
            let p = chi_square_p_value(median, dof).unwrap();
            assert!((p - 0.5).abs() < 0.01, "dof {dof}: p at median = {p}");
        }
    }

    #[test]
    fn frequency_test_balanced_coin() {
        let t = WeightTable::new(&[1.0, 1.0]).unwrap();
        let r = run_frequency_test(&LinearScanEngine::new(), &t, 10_000, 77).unwrap();
        assert_eq!(r.total_draws, 10_000);
        assert!(
            r.counts[0] >= 4_700 && r.counts[0] <= 5_300,
            "{:?}",
            r.counts
        );
        assert!(r.counts[1] >= 4_700 && r.counts[1] <= 5_300);
        assert!(r.is_consistent());
    }

    #[test]
    fn frequency_test_degenerate_mass() {
        let t = WeightTable::new(&[0.0, 1.0]).unwrap();
        let r = run_frequency_test(&LinearScanEngine::new(), &t, 1_000, 1).unwrap();
        assert_eq!(r.counts, vec![0, 1_000]);
        assert_eq!(r.degrees_of_freedom, 0);
        assert_eq!(r.p_value, 1.0);
        assert_eq!(r.total_variation, 0.0);
    }

    #[test]
    fn frequency_test_needs_enough_draws() {
        let t = WeightTable::new(&[1.0; 100]).unwrap();
        let err = run_frequency_test(&LinearScanEngine::new(), &t, 999, 1).unwrap_err();
        assert_eq!(
            err,
            Error::InsufficientDraws {
                requested: 999,
                required: 1000
            }
        );
    }

    #[test]
    fn attempt_test_needs_enough_draws() {
        let t = WeightTable::new(&[1.0]).unwrap();
        let err = run_attempt_test(&LinearScanEngine::new(), &t, 9_999, 1).unwrap_err();
        assert!(matches!(err, Error::InsufficientDraws { .. }));
    }

    #[test]
    fn attempt_test_on_search_engine_is_exact() {
        let t = WeightTable::new(&[1.0, 2.0]).unwrap();
        let r = run_attempt_test(&LinearScanEngine::new(), &t, 10_000, 5).unwrap();
        assert_eq!(r.mean_attempts, 1.0);
        assert_eq!(r.predicted_tau, 1.0);
        assert_eq!(r.predicted_q, 0.0);
        assert_eq!(r.z_score, 0.0);
    }

    #[test]
    fn reports_are_seed_deterministic() {
        let t = WeightTable::new(&[1.0, 2.0, 3.0]).unwrap();
        let a = run_frequency_test(&LinearScanEngine::new(), &t, 5_000, 9).unwrap();
        let b = run_frequency_test(&LinearScanEngine::new(), &t, 5_000, 9).unwrap();
        assert_eq!(a.counts, b.counts);
        assert_eq!(a.chi_square.to_bits(), b.chi_square.to_bits());
        assert_eq!(a.p_value.to_bits(), b.p_value.to_bits());
    }

    #[test]
    fn pooling_folds_sparse_cells() {
        // 3 well-populated cells and 40 cells expecting ~2 hits each: the
        // sparse ones must pool into a single bucket, giving dof 3.
        let mut probs = vec![0.3, 0.3, 0.3];
        probs.extend(std::iter::repeat(0.1 / 40.0).take(40));
        let mut counts = vec![300u64, 290, 312];
        counts.extend(std::iter::repeat(2).take(40));
        let r = frequency_report(&counts, &probs).unwrap();
        assert_eq!(r.degrees_of_freedom, 3);
        assert!(r.p_value > 0.01);
    }
}
