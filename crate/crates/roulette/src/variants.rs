//! Selection variants built on stochastic acceptance: sampling without
//! replacement, acceptance against an a-priori weight bound, and
//! fitness cut-off.

use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::selectors::{Draw, DEFAULT_ATTEMPT_CAP};
use crate::table::WeightTable;

/// What to do with the acceptance bound when the current maximum weight is
/// removed by a without-replacement draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MaxPolicy {
    /// Keep the old maximum as a (valid) stale upper bound. O(1) per draw,
    /// costs extra rejections when the removed maximum dominated.
    #[default]
    Stale,
    /// Rescan for the exact maximum whenever the drawn index held it.
    /// O(N) on those draws, keeps the acceptance rate tight.
    RebuildOnMaxRemoval,
}

/// Draws each positive-weight index exactly once, with the probability of
/// each successive draw proportional to the weights still in play.
///
/// Works on a private copy of the table: a drawn index simply has its
/// weight zeroed, which the acceptance loop then never proposes
/// successfully again. The caller's table is untouched.
///
/// Stateful and strictly single-threaded per instance.
#[derive(Debug, Clone)]
pub struct WithoutReplacementSampler {
    table: WeightTable,
    policy: MaxPolicy,
    remaining: usize,
    attempt_cap: u64,
}

impl WithoutReplacementSampler {
    pub fn new(table: &WeightTable, policy: MaxPolicy) -> Self {
        WithoutReplacementSampler {
            table: table.clone(),
            policy,
            remaining: table.count_positive(),
            attempt_cap: DEFAULT_ATTEMPT_CAP,
        }
    }

    pub fn attempt_cap(mut self, cap: u64) -> Self {
        assert!(cap >= 1, "attempt cap must be at least 1");
        self.attempt_cap = cap;
        self
    }

    /// Indices still drawable.
    pub fn remaining(&self) -> usize {
        self.remaining
    }

    /// Draw the next index; never repeats one. [`Error::Exhausted`] once
    /// every positive-weight index has been used up.
    pub fn draw(&mut self, rng: &mut RandomSource) -> Result<Draw> {
        if self.remaining == 0 {
            return Err(Error::Exhausted);
        }
        let n = self.table.len();
        let bound = self.table.max_bound();
        for attempt in 1..=self.attempt_cap {
            let index = rng.below(n);
            let u = rng.uniform();
            let w = self.table.weight(index);
            if u < w / bound {
                self.table.set_weight(index, 0.0).expect("index in range");
                self.remaining -= 1;
                if self.policy == MaxPolicy::RebuildOnMaxRemoval && w == bound {
                    self.table.rebuild_max();
                }
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

    /// Exhaust the sampler, returning the full draw order.
    pub fn drain(&mut self, rng: &mut RandomSource) -> Result<Vec<usize>> {
        let mut order = Vec::with_capacity(self.remaining);
        while self.remaining > 0 {
            order.push(self.draw(rng)?.index);
        }
        Ok(order)
    }
}

/// Acceptance selection with a caller-supplied bound `B` that is known (or
/// claimed) to dominate every weight. No maximum tracking is needed; the
/// cost is `B · N / total` expected proposals per draw.
///
/// The claim is checked lazily: a proposal whose weight exceeds `B`
/// surfaces [`Error::InvalidBound`] instead of quietly distorting the
/// distribution. Use [`validate_bound`] for an O(N) upfront check.
pub fn draw_bounded(table: &WeightTable, bound: f64, rng: &mut RandomSource) -> Result<Draw> {
    if !bound.is_finite() || bound <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "acceptance bound must be finite and positive, got {bound}"
        )));
    }
    if table.count_positive() == 0 {
        return Err(Error::AllZero);
    }
    let n = table.len();
    for attempt in 1..=DEFAULT_ATTEMPT_CAP {
        let index = rng.below(n);
        let w = table.weight(index);
        let ratio = w / bound;
        if ratio > 1.0 {
            return Err(Error::InvalidBound { bound, weight: w });
        }
        let u = rng.uniform();
        if u < ratio {
            return Ok(Draw {
                index,
                attempts: attempt,
            });
        }
    }
    Err(Error::AttemptCapExceeded {
        cap: DEFAULT_ATTEMPT_CAP,
    })
}

/// O(N) upfront check that `bound` really dominates every weight.
pub fn validate_bound(table: &WeightTable, bound: f64) -> Result<()> {
    if !bound.is_finite() || bound <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "acceptance bound must be finite and positive, got {bound}"
        )));
    }
    for &w in table.weights() {
        if w > bound {
            return Err(Error::InvalidBound { bound, weight: w });
        }
    }
    Ok(())
}

/// Acceptance selection with the bound deliberately placed *below* the
/// maximum: acceptance probability `min(w_i, A) / A`, so the realized
/// distribution is proportional to the weights clipped at `A`.
///
/// With `A >= max` this is ordinary acceptance selection; with `A` below
/// the smallest weight it degenerates to uniform selection.
#[derive(Debug, Clone, Copy)]
pub struct CutoffSampler {
    cutoff: f64,
    attempt_cap: u64,
}

impl CutoffSampler {
    pub fn new(cutoff: f64) -> Result<Self> {
        if !cutoff.is_finite() || cutoff <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "cut-off must be finite and positive, got {cutoff}"
            )));
        }
        Ok(CutoffSampler {
            cutoff,
            attempt_cap: DEFAULT_ATTEMPT_CAP,
        })
    }

    pub fn attempt_cap(mut self, cap: u64) -> Self {
        assert!(cap >= 1, "attempt cap must be at least 1");
        self.attempt_cap = cap;
        self
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn draw(&self, table: &WeightTable, rng: &mut RandomSource) -> Result<Draw> {
        if table.count_positive() == 0 {
            return Err(Error::AllZero);
        }
        let n = table.len();
        for attempt in 1..=self.attempt_cap {
            let index = rng.below(n);
            let ratio = (table.weight(index) / self.cutoff).min(1.0);
            let u = rng.uniform();
            if u < ratio {
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

    /// The distribution this sampler realizes:
    /// `min(w_i, A) / Σ_j min(w_j, A)`.
    pub fn clipped_distribution(&self, table: &WeightTable) -> Result<Vec<f64>> {
        if table.count_positive() == 0 {
            return Err(Error::AllZero);
        }
        let clipped: Vec<f64> = table.weights().iter().map(|&w| w.min(self.cutoff)).collect();
        let total = crate::table::compensated_total(&clipped);
        Ok(clipped.into_iter().map(|w| w / total).collect())
    }
}
