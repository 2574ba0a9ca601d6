//! Weight storage with maintained aggregates.
//!
//! [`WeightTable`] keeps the per-index weights together with a compensated
//! running total, an upper bound on the maximum weight and the count of
//! strictly positive entries, so the selection engines never have to
//! rescan the table to answer those questions.

use crate::error::{Error, Result};

/// Neumaier (improved Kahan) accumulator.
///
/// `step` returns the running estimate after each addition; estimates are
/// clamped monotone non-decreasing so that prefix arrays built from
/// non-negative weights are valid binary-search targets even when the
/// compensation term rounds by an ulp.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
    prev: f64,
}

impl CompensatedSum {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// Add `v` and return the monotone running estimate.
    #[inline]
    pub(crate) fn step(&mut self, v: f64) -> f64 {
        self.add(v);
        let est = self.value();
        self.prev = if est > self.prev { est } else { self.prev };
        self.prev
    }
}

pub(crate) fn compensated_total(weights: &[f64]) -> f64 {
    let mut acc = CompensatedSum::new();
    for &w in weights {
        acc.add(w);
    }
    acc.value()
}

fn check_weight(index: usize, value: f64) -> Result<()> {
    if !value.is_finite() || value < 0.0 {
        return Err(Error::InvalidWeight { index, value });
    }
    Ok(())
}

/// A population's weights plus the aggregates every engine relies on.
///
/// Invariants, maintained by every mutator:
/// - `total()` equals the sum of the weights within the compensated
///   summation error bound,
/// - `max_bound()` is an upper bound on every stored weight (exact after
///   construction, [`rebuild_max`](Self::rebuild_max) and increases;
///   possibly a stale upper bound after decreases),
/// - `count_positive()` is the number of strictly positive weights.
///
/// Weight decreases deliberately never lower `max_bound`: acceptance
/// engines stay correct against a stale upper bound, just less efficient,
/// and callers decide when the O(N) [`rebuild_max`](Self::rebuild_max) is
/// worth it.
#[derive(Debug, Clone)]
pub struct WeightTable {
    weights: Vec<f64>,
    total: CompensatedSum,
    max_bound: f64,
    count_positive: usize,
    version: u64,
    updates_since_resum: usize,
}

impl WeightTable {
    /// Build a table from raw weights.
    ///
    /// Rejects empty input, non-finite or negative entries, and input with
    /// no positive weight at all. Zero weights are allowed as long as at
    /// least one entry is positive.
    pub fn new(weights: &[f64]) -> Result<Self> {
        Self::from_vec(weights.to_vec())
    }

    pub fn from_vec(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyPopulation);
        }
        let mut total = CompensatedSum::new();
        let mut max_bound = 0.0_f64;
        let mut count_positive = 0;
        for (i, &w) in weights.iter().enumerate() {
            check_weight(i, w)?;
            total.add(w);
            if w > max_bound {
                max_bound = w;
            }
            if w > 0.0 {
                count_positive += 1;
            }
        }
        if count_positive == 0 {
            return Err(Error::AllZero);
        }
        Ok(WeightTable {
            weights,
            total,
            max_bound,
            count_positive,
            version: 0,
            updates_since_resum: 0,
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    #[inline]
    pub fn weight(&self, index: usize) -> f64 {
        self.weights[index]
    }

    #[inline]
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    #[inline]
    pub fn total(&self) -> f64 {
        self.total.value()
    }

    /// Upper bound on the stored weights. Exact unless a decrease has been
    /// applied since the last build or [`rebuild_max`](Self::rebuild_max).
    #[inline]
    pub fn max_bound(&self) -> f64 {
        self.max_bound
    }

    #[inline]
    pub fn count_positive(&self) -> usize {
        self.count_positive
    }

    #[inline]
    pub fn mean_weight(&self) -> f64 {
        self.total() / self.len() as f64
    }

    /// Bumped on every mutation; engines that precompute structure snapshot
    /// it and refuse to select against a table that moved on.
    #[inline]
    pub fn version(&self) -> u64 {
        self.version
    }

    /// Index of the last strictly positive weight, if any. Used by the
    /// search engines to resolve the zero-measure end-of-range case.
    pub(crate) fn last_positive(&self) -> Option<usize> {
        self.weights.iter().rposition(|&w| w > 0.0)
    }

    /// Replace the weight at `index`.
    ///
    /// O(1): the total is adjusted incrementally (with a periodic full
    /// recompute to cap drift) and `max_bound` only ever grows here.
    pub fn set_weight(&mut self, index: usize, value: f64) -> Result<()> {
        if index >= self.weights.len() {
            return Err(Error::IndexOutOfRange {
                index,
                len: self.weights.len(),
            });
        }
        check_weight(index, value)?;
        let old = self.weights[index];
        self.weights[index] = value;
        self.total.add(value);
        self.total.add(-old);
        if value > self.max_bound {
            self.max_bound = value;
        }
        match (old > 0.0, value > 0.0) {
            (false, true) => self.count_positive += 1,
            (true, false) => self.count_positive -= 1,
            _ => {}
        }
        self.version += 1;
        self.updates_since_resum += 1;
        // Signed incremental adjustments defeat the non-negativity that the
        // compensated error bound leans on; resum after 4N of them.
        if self.updates_since_resum > 4 * self.weights.len() {
            self.resum();
        }
        Ok(())
    }

    /// Append a new index with the given weight (populations that grow,
    /// e.g. network generation). O(1); `max_bound` stays exact.
    pub fn push_weight(&mut self, value: f64) -> Result<()> {
        check_weight(self.weights.len(), value)?;
        self.weights.push(value);
        self.total.add(value);
        if value > self.max_bound {
            self.max_bound = value;
        }
        if value > 0.0 {
            self.count_positive += 1;
        }
        self.version += 1;
        Ok(())
    }

    /// Restore `max_bound` to the exact maximum with one O(N) scan.
    /// Idempotent; never changes the selection distribution, only the
    /// acceptance engines' expected attempt count.
    pub fn rebuild_max(&mut self) {
        self.max_bound = self.weights.iter().copied().fold(0.0, f64::max);
    }

    fn resum(&mut self) {
        let mut acc = CompensatedSum::new();
        for &w in &self.weights {
            acc.add(w);
        }
        self.total = acc;
        self.updates_since_resum = 0;
    }

    /// The target selection probabilities `w_i / total`.
    pub fn target_distribution(&self) -> Result<Vec<f64>> {
        if self.count_positive == 0 {
            return Err(Error::AllZero);
        }
        let total = self.total();
        Ok(self.weights.iter().map(|&w| w / total).collect())
    }
}
