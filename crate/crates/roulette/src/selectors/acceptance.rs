use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::table::WeightTable;

use super::{Draw, Selector, DEFAULT_ATTEMPT_CAP};

/// Stochastic-acceptance engine.
///
/// Each attempt proposes an index uniformly and accepts it with
/// probability `w_i / bound`. As long as `bound` is an upper bound on the
/// weights, the accepted index is distributed exactly proportionally to
/// the weights; the bound only controls how many proposals a draw costs
/// (`bound · N / total` in expectation, minimized by the tight bound).
///
/// By default the engine follows the table's live `max_bound`, so it
/// tolerates incremental weight updates with no rebuild. A fixed bound can
/// be set instead for the generalized variant; it is validated against the
/// live maximum on every call.
#[derive(Debug, Clone, Copy)]
pub struct AcceptanceEngine {
    fixed_bound: Option<f64>,
    attempt_cap: u64,
}

impl AcceptanceEngine {
    /// Engine that accepts against the table's tracked maximum.
    pub fn new() -> Self {
        AcceptanceEngine {
            fixed_bound: None,
            attempt_cap: DEFAULT_ATTEMPT_CAP,
        }
    }

    /// Engine that accepts with probability `w_i / bound` for a caller
    /// supplied constant. Larger bounds trade attempts for nothing; the
    /// distribution is unchanged while `bound >= max_bound`.
    pub fn with_bound(bound: f64) -> Self {
        AcceptanceEngine {
            fixed_bound: Some(bound),
            attempt_cap: DEFAULT_ATTEMPT_CAP,
        }
    }

    pub fn attempt_cap(mut self, cap: u64) -> Self {
        assert!(cap >= 1, "attempt cap must be at least 1");
        self.attempt_cap = cap;
        self
    }

    fn resolve_bound(&self, table: &WeightTable) -> Result<f64> {
        match self.fixed_bound {
            None => Ok(table.max_bound()),
            Some(bound) => {
                if !bound.is_finite() || bound < table.max_bound() {
                    return Err(Error::InvalidBound {
                        bound,
                        weight: table.max_bound(),
                    });
                }
                Ok(bound)
            }
        }
    }
}

impl Default for AcceptanceEngine {
    fn default() -> Self {
        Self::new()
    }
}

impl Selector for AcceptanceEngine {
    fn select(&self, table: &WeightTable, rng: &mut RandomSource) -> Result<Draw> {
        if table.count_positive() == 0 {
            return Err(Error::AllZero);
        }
        let bound = self.resolve_bound(table)?;
        let n = table.len();
        for attempt in 1..=self.attempt_cap {
            let index = rng.below(n);
            let u = rng.uniform();
            // Strict comparison: w == bound always accepts (u < 1 holds),
            // w == 0 never does (u < 0 is impossible).
            if u < table.weight(index) / bound {
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
        let bound = self
            .fixed_bound
            .unwrap_or_else(|| table.max_bound());
        bound * table.len() as f64 / table.total()
    }
}
