use thiserror::Error;

/// Errors shared by table construction, the selection engines, the
/// sampling variants and the statistical tests.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("population is empty")]
    EmptyPopulation,

    #[error("invalid weight {value} at index {index}: weights must be finite and >= 0")]
    InvalidWeight { index: usize, value: f64 },

    #[error("all weights are zero; nothing can be selected")]
    AllZero,

    #[error("index {index} out of range for population of size {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("engine built against table version {engine_version}, table is now at {table_version}; rebuild the engine")]
    StaleEngine {
        engine_version: u64,
        table_version: u64,
    },

    #[error("no proposal accepted within {cap} attempts; acceptance bound is likely far above the live weights")]
    AttemptCapExceeded { cap: u64 },

    #[error("sampler exhausted: every positive-weight index has already been drawn")]
    Exhausted,

    #[error("acceptance bound {bound} does not cover weight {weight}")]
    InvalidBound { bound: f64, weight: f64 },

    #[error("statistical test needs at least {required} draws, got {requested}")]
    InsufficientDraws { requested: u64, required: u64 },

    #[error("chi-square degrees of freedom must be >= 1")]
    InvalidDof,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
