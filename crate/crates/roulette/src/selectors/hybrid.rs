use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::table::{CompensatedSum, WeightTable};

use super::{Draw, Selector, DEFAULT_ATTEMPT_CAP};

/// Default heavy-set threshold: an index is "heavy" when its weight
/// exceeds this fraction of the table total, which caps the heavy set at
/// `1 / fraction` members.
pub const DEFAULT_HEAVY_FRACTION: f64 = 0.1;

/// Combined engine for heavy-tailed weight distributions.
///
/// Indices whose weight exceeds `threshold_fraction · total` form the
/// heavy set and are selected exactly through a small prefix-sum table;
/// everything else is handled by stochastic acceptance whose bound is the
/// residual maximum, not the global one. The overall distribution is still
/// exactly proportional to the weights, but a lone dominant weight no
/// longer poisons the acceptance rate of the rest.
///
/// Degenerate partitions are fine: an empty heavy set reduces to plain
/// acceptance, an empty (or all-zero) residual to a pure prefix-sum
/// lookup.
///
/// Like [`PrefixSumEngine`](super::PrefixSumEngine), the partition is a
/// snapshot; table mutation after the build makes selection fail with
/// [`Error::StaleEngine`].
#[derive(Debug, Clone)]
pub struct HybridEngine {
    heavy: Vec<usize>,
    heavy_prefix: Vec<f64>,
    heavy_total: f64,
    residual: Vec<usize>,
    residual_bound: f64,
    residual_total: f64,
    version: u64,
    attempt_cap: u64,
}

impl HybridEngine {
    /// Partition `table` with the [`DEFAULT_HEAVY_FRACTION`] threshold.
    pub fn new(table: &WeightTable) -> Result<Self> {
        Self::with_threshold(table, DEFAULT_HEAVY_FRACTION)
    }

    /// Partition `table`, taking every index with
    /// `w_i > threshold_fraction · total` into the heavy set.
    pub fn with_threshold(table: &WeightTable, threshold_fraction: f64) -> Result<Self> {
        if !(threshold_fraction > 0.0 && threshold_fraction < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "heavy-set threshold fraction must be in (0, 1), got {threshold_fraction}"
            )));
        }
        if table.count_positive() == 0 {
            return Err(Error::AllZero);
        }
        let cut = threshold_fraction * table.total();
        let mut heavy = Vec::new();
        let mut residual = Vec::new();
        let mut residual_bound = 0.0_f64;
        let mut residual_sum = CompensatedSum::new();
        for (i, &w) in table.weights().iter().enumerate() {
            if w > cut {
                heavy.push(i);
            } else {
                residual.push(i);
                residual_sum.add(w);
                if w > residual_bound {
                    residual_bound = w;
                }
            }
        }
        let mut acc = CompensatedSum::new();
        let heavy_prefix: Vec<f64> = heavy.iter().map(|&i| acc.step(table.weight(i))).collect();
        let heavy_total = heavy_prefix.last().copied().unwrap_or(0.0);
        Ok(HybridEngine {
            heavy,
            heavy_prefix,
            heavy_total,
            residual,
            residual_bound,
            residual_total: residual_sum.value(),
            version: table.version(),
            attempt_cap: DEFAULT_ATTEMPT_CAP,
        })
    }

    pub fn attempt_cap(mut self, cap: u64) -> Self {
        assert!(cap >= 1, "attempt cap must be at least 1");
        self.attempt_cap = cap;
        self
    }

    pub fn heavy_indices(&self) -> &[usize] {
        &self.heavy
    }

    pub fn residual_indices(&self) -> &[usize] {
        &self.residual
    }

    /// Probability mass handled exactly by the heavy prefix table.
    pub fn heavy_mass_fraction(&self, table: &WeightTable) -> f64 {
        (self.heavy_total / table.total()).clamp(0.0, 1.0)
    }

    fn check_fresh(&self, table: &WeightTable) -> Result<()> {
        if self.version != table.version()
            || self.heavy.len() + self.residual.len() != table.len()
        {
            return Err(Error::StaleEngine {
                engine_version: self.version,
                table_version: table.version(),
            });
        }
        Ok(())
    }

    fn pick_heavy(&self, r: f64) -> usize {
        let idx = self.heavy_prefix.partition_point(|&c| c <= r);
        // Heavy weights are all strictly positive, so the rounding-corner
        // clamp can safely land on the last member.
        self.heavy[idx.min(self.heavy.len() - 1)]
    }
}

impl Selector for HybridEngine {
    fn select(&self, table: &WeightTable, rng: &mut RandomSource) -> Result<Draw> {
        self.check_fresh(table)?;
        if table.count_positive() == 0 {
            return Err(Error::AllZero);
        }
        // One unit variate decides the branch and, within the heavy
        // branch, doubles as the prefix-sum threshold: r < heavy_total
        // happens with exactly the heavy mass fraction, and conditioned on
        // that r is uniform over the heavy prefix span.
        let r = rng.uniform() * table.total();
        if !self.heavy.is_empty() && r < self.heavy_total {
            return Ok(Draw {
                index: self.pick_heavy(r),
                attempts: 1,
            });
        }
        if self.residual.is_empty() || self.residual_bound <= 0.0 {
            // All selectable mass is heavy; r >= heavy_total only through
            // ulp-level rounding. Resolve into the heavy table.
            return Ok(Draw {
                index: self.pick_heavy(r),
                attempts: 1,
            });
        }
        for attempt in 1..=self.attempt_cap {
            let j = rng.below(self.residual.len());
            let index = self.residual[j];
            let u = rng.uniform();
            if u < table.weight(index) / self.residual_bound {
                return Ok(Draw {
                    index,
                    attempts: attempt,
                });
            }
        }
        Err(Error::AttemptCapExceeded {
            cap: self.attempt_cap,
        })
    }

    fn expected_attempts(&self, table: &WeightTable) -> f64 {
        let p_heavy = self.heavy_mass_fraction(table);
        if self.residual_total <= 0.0 {
            return 1.0;
        }
        let residual_tau = self.residual_bound * self.residual.len() as f64 / self.residual_total;
        p_heavy + (1.0 - p_heavy) * residual_tau
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dominant_weight_partition() {
        // N = 10_000: one weight of 1e4, the rest 1.0.
        let mut weights = vec![1.0; 10_000];
        weights[0] = 1e4;
        let t = WeightTable::from_vec(weights).unwrap();
        let eng = HybridEngine::with_threshold(&t, 0.1).unwrap();
        assert_eq!(eng.heavy_indices(), &[0]);
        assert_eq!(eng.residual_indices().len(), 9_999);
        let p_heavy = eng.heavy_mass_fraction(&t);
        assert!((p_heavy - 1e4 / 19_999.0).abs() < 1e-12);
        // Residual is flat, so nearly every residual proposal accepts.
        assert!(eng.expected_attempts(&t) < 1.01);
    }

    #[test]
    fn nine_one_partition() {
        let t = WeightTable::new(&[9.0, 1.0]).unwrap();
        let eng = HybridEngine::with_threshold(&t, 0.5).unwrap();
        assert_eq!(eng.heavy_indices(), &[0]);
        assert_eq!(eng.residual_indices(), &[1]);
    }

    #[test]
    fn flat_table_goes_all_heavy() {
        // Every p_i = 0.25 exceeds the 0.1 threshold, so the partition
        // degenerates to a pure prefix-sum engine.
        let t = WeightTable::new(&[1.0, 1.0, 1.0, 1.0]).unwrap();
        let eng = HybridEngine::with_threshold(&t, 0.1).unwrap();
        assert_eq!(eng.heavy_indices().len(), 4);
        assert!(eng.residual_indices().is_empty());
        assert_eq!(eng.expected_attempts(&t), 1.0);
        let mut rng = RandomSource::new(5);
        let mut seen = [0u32; 4];
        for _ in 0..4000 {
            let d = eng.select(&t, &mut rng).unwrap();
            assert_eq!(d.attempts, 1);
            seen[d.index] += 1;
        }
        assert!(seen.iter().all(|&c| c > 800));
    }

    #[test]
    fn empty_heavy_set_behaves_like_acceptance() {
        // 20 equal weights: each p_i = 0.05 < 0.1, nothing is heavy.
        let t = WeightTable::new(&[2.0; 20]).unwrap();
        let eng = HybridEngine::with_threshold(&t, 0.1).unwrap();
        assert!(eng.heavy_indices().is_empty());
        assert_eq!(eng.expected_attempts(&t), 1.0);
        let mut rng = RandomSource::new(6);
        let d = eng.select(&t, &mut rng).unwrap();
        assert!(d.index < 20);
    }

    #[test]
    fn invalid_threshold_rejected() {
        let t = WeightTable::new(&[1.0]).unwrap();
        assert!(HybridEngine::with_threshold(&t, 0.0).is_err());
        assert!(HybridEngine::with_threshold(&t, 1.0).is_err());
        assert!(HybridEngine::with_threshold(&t, f64::NAN).is_err());
    }

    #[test]
    fn stale_after_mutation() {
        let mut t = WeightTable::new(&[9.0, 1.0]).unwrap();
        let eng = HybridEngine::new(&t).unwrap();
        t.set_weight(1, 2.0).unwrap();
        let mut rng = RandomSource::new(7);
        assert!(matches!(
            eng.select(&t, &mut rng).unwrap_err(),
            Error::StaleEngine { .. }
        ));
    }

    #[test]
    fn zero_residual_mass_stays_exact() {
        let t = WeightTable::new(&[10.0, 0.0, 0.0]).unwrap();
        let eng = HybridEngine::new(&t).unwrap();
        let mut rng = RandomSource::new(8);
        for _ in 0..200 {
            assert_eq!(eng.select(&t, &mut rng).unwrap().index, 0);
        }
    }
}
