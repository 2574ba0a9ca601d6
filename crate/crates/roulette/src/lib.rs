//! Weighted random selection with interchangeable engines.
//!
//! Given non-negative weights `w_0 .. w_{N-1}`, every engine in this crate
//! draws index `i` with probability `w_i / Σ w_j` (roulette-wheel /
//! fitness-proportionate selection). The interesting one is the
//! stochastic-acceptance engine, which replaces the usual cumulative-sum
//! search with a propose-and-accept loop whose expected cost per draw is
//! `w_max / ⟨w⟩` proposals — independent of N for well-behaved weight
//! distributions. Linear-scan and binary-search engines are provided as
//! exact baselines, and a hybrid engine keeps the acceptance rate healthy
//! when a few weights dominate the table.
//!
//! On top of the engines sit the common selection variants (sampling
//! without replacement by zeroing drawn weights, acceptance against a
//! known weight bound, fitness cut-off), a statistical verification kit
//! (chi-square goodness of fit, attempt-count laws), and a
//! preferential-attachment network generator that serves as a naturally
//! heavy-tailed, dynamically growing workload.
//!
//! ```
//! use roulette::{AcceptanceEngine, RandomSource, Selector, WeightTable};
//!
//! let table = WeightTable::new(&[1.0, 2.0, 3.0, 4.0])?;
//! let engine = AcceptanceEngine::new();
//! let mut rng = RandomSource::new(42);
//! let draw = engine.select(&table, &mut rng)?;
//! assert!(draw.index < 4);
//! # Ok::<(), roulette::Error>(())
//! ```
//!
//! # Concurrency
//!
//! Tables and engines carry no interior mutability. A frozen table may be
//! shared across threads for concurrent read-only selection as long as
//! each thread owns its [`RandomSource`]; mutation requires exclusive
//! access and invalidates the snapshot engines through the table's
//! version counter.

mod error;
pub mod netgen;
pub mod rng;
pub mod selectors;
pub mod stats;
mod table;
pub mod variants;

pub use error::{Error, Result};
pub use rng::{derive_seed, RandomSource};
pub use selectors::{
    AcceptanceEngine, AttemptStats, Draw, HybridEngine, LinearScanEngine, PrefixSumEngine,
    Selector, DEFAULT_ATTEMPT_CAP,
};
pub use table::WeightTable;
