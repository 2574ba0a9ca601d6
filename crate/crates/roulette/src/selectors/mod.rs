//! Interchangeable selection engines.
//!
//! Every engine realizes the same contract: return index `i` with
//! probability `w_i / total`. They differ only in how they locate the
//! index and therefore in cost:
//!
//! * [`LinearScanEngine`] — walk the cumulative sum, O(N) per draw.
//! * [`PrefixSumEngine`] — binary search over precomputed prefix sums,
//!   O(log N) per draw, O(N) build, invalidated by table mutation.
//! * [`AcceptanceEngine`] — propose uniformly, accept with probability
//!   `w_i / bound`; expected `bound·N/total` proposals per draw, which is
//!   O(1) whenever the maximum does not run away from the mean.
//! * [`HybridEngine`] — exact prefix treatment of the few dominant
//!   weights, stochastic acceptance over the rest.

mod acceptance;
mod binary;
mod hybrid;
mod linear;

pub use acceptance::AcceptanceEngine;
pub use binary::PrefixSumEngine;
pub use hybrid::HybridEngine;
pub use linear::LinearScanEngine;

use crate::error::Result;
use crate::rng::RandomSource;
use crate::table::WeightTable;

/// Rejection-loop ceiling. Converts pathological configurations (for
/// example a wildly stale acceptance bound over a nearly-empty table)
/// into a diagnosable error instead of a hang.
pub const DEFAULT_ATTEMPT_CAP: u64 = 10_000_000;

/// One completed selection: the chosen index and how many candidate
/// proposals it took. Search engines always report a single attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Draw {
    pub index: usize,
    pub attempts: u64,
}

/// Common face of the four engines.
///
/// Engines hold only their own derived state (prefix sums, partitions,
/// bounds) and take the table at call time; the ones that precompute
/// structure verify the table's version counter and report
/// [`StaleEngine`](crate::Error::StaleEngine) when it has moved on.
pub trait Selector {
    /// Draw one index distributed proportionally to the table weights.
    fn select(&self, table: &WeightTable, rng: &mut RandomSource) -> Result<Draw>;

    /// Expected number of proposals per draw for the engine's current
    /// configuration; exactly 1 for the search engines.
    fn expected_attempts(&self, table: &WeightTable) -> f64;
}

/// Running attempt/draw counters for a stream of selections.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AttemptStats {
    draws: u64,
    attempts: u64,
}

impl AttemptStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, draw: &Draw) {
        self.draws += 1;
        self.attempts += draw.attempts;
    }

    pub fn draws(&self) -> u64 {
        self.draws
    }

    pub fn attempts(&self) -> u64 {
        self.attempts
    }

    pub fn mean_attempts(&self) -> f64 {
        self.attempts as f64 / self.draws as f64
    }

    /// Fraction of proposals that were rejected.
    pub fn rejection_rate(&self) -> f64 {
        1.0 - self.draws as f64 / self.attempts as f64
    }

    pub fn merge(&mut self, other: &AttemptStats) {
        self.draws += other.draws;
        self.attempts += other.attempts;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn attempt_stats_accumulate() {
        let mut s = AttemptStats::new();
        s.record(&Draw {
            index: 0,
            attempts: 1,
        });
        s.record(&Draw {
            index: 3,
            attempts: 3,
        });
        assert_eq!(s.draws(), 2);
        assert_eq!(s.attempts(), 4);
        assert_eq!(s.mean_attempts(), 2.0);
        assert_eq!(s.rejection_rate(), 0.5);
    }
}
