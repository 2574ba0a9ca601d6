//! Synthetic weight workloads for benchmarks and verification.

use std::fmt;
use std::str::FromStr;

use roulette::{RandomSource, WeightTable};

use crate::BenchError;

/// Upper clamp for power-law draws; keeps the expected attempt count of
/// acceptance selection finite even for shallow exponents.
pub const POWER_LAW_CAP: f64 = 1e9;

/// Named weight distribution.
///
/// Grammar (the `--dist` flag): `uniform01`, `constant`,
/// `two-level:VALUE:COUNT`, `power-law:EXPONENT`.
#[derive(Debug, Clone, PartialEq)]
pub enum DistributionSpec {
    /// Independent uniform weights in the open interval (0, 1).
    Uniform01,
    /// Every weight exactly 1.
    Constant,
    /// `heavy_count` entries of `heavy_value`, the rest 1.
    TwoLevel { heavy_value: f64, heavy_count: usize },
    /// Pareto tail `P(W > w) ~ w^(1-exponent)`, clamped at
    /// [`POWER_LAW_CAP`]. `exponent` is the density exponent, > 1.
    PowerLaw { exponent: f64 },
}

impl FromStr for DistributionSpec {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, BenchError> {
        let bad = |msg: String| Err(BenchError::InvalidSpec(msg));
        match s {
            "uniform01" => return Ok(DistributionSpec::Uniform01),
            "constant" => return Ok(DistributionSpec::Constant),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("two-level:") {
            let mut parts = rest.splitn(2, ':');
            let value = parts.next().unwrap_or("");
            let count = parts.next().unwrap_or("");
            let heavy_value: f64 = match value.parse() {
                Ok(v) => v,
                Err(_) => return bad(format!("two-level value '{value}' is not a number")),
            };
            let heavy_count: usize = match count.parse() {
                Ok(c) => c,
                Err(_) => return bad(format!("two-level count '{count}' is not an integer")),
            };
            if !heavy_value.is_finite() || heavy_value <= 0.0 {
                return bad(format!("two-level value must be positive, got {heavy_value}"));
            }
            if heavy_count < 1 {
                return bad("two-level count must be at least 1".into());
            }
            return Ok(DistributionSpec::TwoLevel {
                heavy_value,
                heavy_count,
            });
        }
        if let Some(rest) = s.strip_prefix("power-law:") {
            let exponent: f64 = match rest.parse() {
                Ok(e) => e,
                Err(_) => return bad(format!("power-law exponent '{rest}' is not a number")),
            };
            if !exponent.is_finite() || exponent <= 1.0 {
                return bad(format!("power-law exponent must be > 1, got {exponent}"));
            }
            return Ok(DistributionSpec::PowerLaw { exponent });
        }
        bad(format!(
            "unknown distribution '{s}' (expected uniform01, constant, \
             two-level:VALUE:COUNT or power-law:EXPONENT)"
        ))
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistributionSpec::Uniform01 => write!(f, "uniform01"),
            DistributionSpec::Constant => write!(f, "constant"),
            DistributionSpec::TwoLevel {
                heavy_value,
                heavy_count,
            } => write!(f, "two-level:{heavy_value}:{heavy_count}"),
            DistributionSpec::PowerLaw { exponent } => write!(f, "power-law:{exponent}"),
        }
    }
}

/// Generate `n` weights from `spec`, deterministically in `(spec, n,
/// seed)`.
pub fn generate_weights(
    spec: &DistributionSpec,
    n: usize,
    seed: u64,
) -> Result<WeightTable, BenchError> {
    if n < 1 {
        return Err(BenchError::InvalidSpec(format!(
            "population size must be at least 1, got {n}"
        )));
    }
    let mut rng = RandomSource::new(seed);
    let mut open_unit = move || loop {
        let u = rng.uniform();
        if u > 0.0 {
            break u;
        }
    };
    let weights: Vec<f64> = match spec {
        DistributionSpec::Uniform01 => (0..n).map(|_| open_unit()).collect(),
        DistributionSpec::Constant => vec![1.0; n],
        DistributionSpec::TwoLevel {
            heavy_value,
            heavy_count,
        } => {
            if *heavy_count > n {
                return Err(BenchError::InvalidSpec(format!(
                    "two-level count {heavy_count} exceeds population size {n}"
                )));
            }
            let mut w = vec![*heavy_value; *heavy_count];
            w.resize(n, 1.0);
            w
        }
        DistributionSpec::PowerLaw { exponent } => (0..n)
            .map(|_| open_unit().powf(-1.0 / (exponent - 1.0)).min(POWER_LAW_CAP))
            .collect(),
    };
    Ok(WeightTable::from_vec(weights)?)
}
