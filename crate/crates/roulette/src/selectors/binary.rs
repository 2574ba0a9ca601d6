use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::table::{CompensatedSum, WeightTable};

use super::{Draw, Selector};

/// O(log N) engine: binary search over precomputed cumulative sums.
///
/// The prefix array is a snapshot of the table at build time. Selecting
/// against a table that has been mutated since then fails with
/// [`Error::StaleEngine`] instead of silently answering from outdated
/// sums; rebuilding is an explicit O(N) decision left to the caller.
#[derive(Debug, Clone)]
pub struct PrefixSumEngine {
    prefix: Vec<f64>,
    version: u64,
}

impl PrefixSumEngine {
    pub fn new(table: &WeightTable) -> Self {
        let mut acc = CompensatedSum::new();
        let prefix = table.weights().iter().map(|&w| acc.step(w)).collect();
        PrefixSumEngine {
            prefix,
            version: table.version(),
        }
    }

    fn check_fresh(&self, table: &WeightTable) -> Result<()> {
        if self.version != table.version() || self.prefix.len() != table.len() {
            return Err(Error::StaleEngine {
                engine_version: self.version,
                table_version: table.version(),
            });
        }
        Ok(())
    }

    /// Binary-search the sector containing `u · total`; same half-open
    /// boundary rule and the same compensated sums as
    /// [`LinearScanEngine`](super::LinearScanEngine), hence bit-identical
    /// answers for any shared `u`.
    pub fn locate(&self, table: &WeightTable, u: f64) -> Result<usize> {
        self.check_fresh(table)?;
        if table.count_positive() == 0 {
            return Err(Error::AllZero);
        }
        let r = u * table.total();
        let idx = self.prefix.partition_point(|&c| c <= r);
        if idx < self.prefix.len() {
            Ok(idx)
        } else {
            Ok(table.last_positive().expect("positive weight exists"))
        }
    }
}

impl Selector for PrefixSumEngine {
    fn select(&self, table: &WeightTable, rng: &mut RandomSource) -> Result<Draw> {
        let index = self.locate(table, rng.uniform())?;
        Ok(Draw { index, attempts: 1 })
    }

    fn expected_attempts(&self, _table: &WeightTable) -> f64 {
        1.0
    }
}
