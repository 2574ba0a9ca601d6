use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::table::{CompensatedSum, WeightTable};

use super::{Draw, Selector};

/// O(N) baseline: walk the running cumulative sum until it passes the
/// threshold `r = u · total`. Stateless, so it always reflects the live
/// table and can never be stale.
#[derive(Debug, Clone, Copy, Default)]
pub struct LinearScanEngine;

impl LinearScanEngine {
    pub fn new() -> Self {
        LinearScanEngine
    }

    /// Locate the sector containing `u · total` for a unit variate
    /// `u ∈ [0, 1)`. Sector membership is half-open, `[c_{i-1}, c_i)`,
    /// so zero-width (zero-weight) sectors are never selected.
    ///
    /// The running sum uses the same compensated accumulator as
    /// [`PrefixSumEngine`](super::PrefixSumEngine), which makes the two
    /// engines agree index-for-index on any shared `u`.
    pub fn locate(&self, table: &WeightTable, u: f64) -> Result<usize> {
        if table.count_positive() == 0 {
            return Err(Error::AllZero);
        }
        let r = u * table.total();
        let mut acc = CompensatedSum::new();
        for (i, &w) in table.weights().iter().enumerate() {
            if r < acc.step(w) {
                return Ok(i);
            }
        }
        // u is in [0, 1), so r lands inside the final positive sector in
        // everything but ulp-level rounding corners; resolve those to the
        // last selectable index.
        Ok(table.last_positive().expect("positive weight exists"))
    }
}

impl Selector for LinearScanEngine {
    fn select(&self, table: &WeightTable, rng: &mut RandomSource) -> Result<Draw> {
        let index = self.locate(table, rng.uniform())?;
        Ok(Draw { index, attempts: 1 })
    }

    fn expected_attempts(&self, _table: &WeightTable) -> f64 {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn locates_sectors_half_open() {
        let t = WeightTable::new(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        let eng = LinearScanEngine::new();
        assert_eq!(eng.locate(&t, 0.05).unwrap(), 0); // r = 0.5
        assert_eq!(eng.locate(&t, 0.95).unwrap(), 3); // r = 9.5
        assert_eq!(eng.locate(&t, 0.0).unwrap(), 0);
        assert_eq!(eng.locate(&t, 0.299999).unwrap(), 1); // r = 2.99999 < 3
        assert_eq!(eng.locate(&t, 0.3).unwrap(), 2); // r = 3 lands in [3, 6)
    }

    #[test]
    fn zero_weight_sectors_are_skipped() {
        let t = WeightTable::new(&[0.0, 1.0, 0.0]).unwrap();
        let eng = LinearScanEngine::new();
        for u in [0.0, 0.25, 0.5, 0.999_999] {
            assert_eq!(eng.locate(&t, u).unwrap(), 1);
        }
    }

    #[test]
    fn all_zero_is_an_error() {
        let mut t = WeightTable::new(&[1.0]).unwrap();
        t.set_weight(0, 0.0).unwrap();
        let eng = LinearScanEngine::new();
        assert_eq!(eng.locate(&t, 0.5).unwrap_err(), Error::AllZero);
    }

    #[test]
    fn select_reports_one_attempt() {
        let t = WeightTable::new(&[2.0, 2.0]).unwrap();
        let eng = LinearScanEngine::new();
        let mut rng = RandomSource::new(3);
        let d = eng.select(&t, &mut rng).unwrap();
        assert_eq!(d.attempts, 1);
        assert!(d.index < 2);
    }
}
