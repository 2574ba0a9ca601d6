//! Timed selection benchmark.
//!
//! Each (method, n) cell times a tight loop of single selections against
//! a freshly generated table. Engine construction is timed separately and
//! never folded into the per-selection figure; selected indices are
//! accumulated into a checksum that is handed to `black_box` so the loop
//! cannot be optimized away.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use roulette::{
    derive_seed, AcceptanceEngine, HybridEngine, LinearScanEngine, PrefixSumEngine, RandomSource,
    Selector, WeightTable,
};

use crate::workload::{generate_weights, DistributionSpec};
use crate::BenchError;

/// Selection method under measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Linear,
    Binary,
    Acceptance,
    Hybrid,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Linear,
        Method::Binary,
        Method::Acceptance,
        Method::Hybrid,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Linear => "linear",
            Method::Binary => "binary",
            Method::Acceptance => "acceptance",
            Method::Hybrid => "hybrid",
        }
    }

    pub fn engine_kind(&self) -> roulette::netgen::EngineKind {
        match self {
            Method::Linear => roulette::netgen::EngineKind::Linear,
            Method::Binary => roulette::netgen::EngineKind::Binary,
            Method::Acceptance => roulette::netgen::EngineKind::Acceptance,
            Method::Hybrid => roulette::netgen::EngineKind::Hybrid,
        }
    }
}

impl std::str::FromStr for Method {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, BenchError> {
        match s {
            "linear" => Ok(Method::Linear),
            "binary" => Ok(Method::Binary),
            "acceptance" => Ok(Method::Acceptance),
            "hybrid" => Ok(Method::Hybrid),
            _ => Err(BenchError::InvalidSpec(format!(
                "unknown method '{s}' (expected linear, binary, acceptance or hybrid)"
            ))),
        }
    }
}

/// One benchmark measurement row. Everything except `ns_per_select` is a
/// deterministic function of the inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub method: String,
    pub n: usize,
    pub dist: String,
    pub samples: u64,
    pub ns_per_select: f64,
    pub mean_attempts: f64,
    pub seed: u64,
}

/// A record plus the engine build time it deliberately excludes.
#[derive(Debug, Clone)]
pub struct CellResult {
    pub record: BenchRecord,
    pub build_ns: f64,
}

/// Run the full (method × n) grid.
///
/// `samples >= 1000` and `warmup >= 100` are required for timing
/// stability.
pub fn run_bench(
    methods: &[Method],
    n_list: &[usize],
    spec: &DistributionSpec,
    samples: u64,
    warmup: u64,
    seed: u64,
) -> Result<Vec<CellResult>, BenchError> {
    if samples < 1_000 {
        return Err(BenchError::InvalidSpec(format!(
            "need at least 1000 samples for stable timing, got {samples}"
        )));
    }
    if warmup < 100 {
        return Err(BenchError::InvalidSpec(format!(
            "need at least 100 warmup draws, got {warmup}"
        )));
    }
    let mut results = Vec::with_capacity(methods.len() * n_list.len());
    for &n in n_list {
        let table = generate_weights(spec, n, derive_seed(seed, &[n as u64]))?;
        for (mi, method) in methods.iter().enumerate() {
            let draw_seed = derive_seed(seed, &[n as u64, mi as u64 + 1]);
            let cell = time_cell(*method, &table, samples, warmup, draw_seed)?;
            results.push(CellResult {
                record: BenchRecord {
                    method: method.name().to_string(),
                    n,
                    dist: spec.to_string(),
                    samples,
                    ns_per_select: cell.0,
                    mean_attempts: cell.1,
                    seed,
                },
                build_ns: cell.2,
            });
        }
    }
    Ok(results)
}

fn time_cell(
    method: Method,
    table: &WeightTable,
    samples: u64,
    warmup: u64,
    draw_seed: u64,
) -> Result<(f64, f64, f64), BenchError> {
    let build_start = Instant::now();
    let engine: Box<dyn Selector> = match method {
        Method::Linear => Box::new(LinearScanEngine::new()),
        Method::Binary => Box::new(PrefixSumEngine::new(table)),
        Method::Acceptance => Box::new(AcceptanceEngine::new()),
        Method::Hybrid => Box::new(HybridEngine::new(table)?),
    };
    let build_ns = build_start.elapsed().as_nanos() as f64;

    let mut rng = RandomSource::new(draw_seed);
    let mut checksum = 0u64;
    for _ in 0..warmup {
        checksum = checksum.wrapping_add(engine.select(table, &mut rng)?.index as u64);
    }
    let mut attempts = 0u64;
    let start = Instant::now();
    for _ in 0..samples {
        let draw = engine.select(table, &mut rng)?;
        checksum = checksum.wrapping_add(draw.index as u64);
        attempts += draw.attempts;
    }
    let elapsed = start.elapsed();
    std::hint::black_box(checksum);

    let ns_per_select = elapsed.as_nanos() as f64 / samples as f64;
    let mean_attempts = attempts as f64 / samples as f64;
    Ok((ns_per_select, mean_attempts, build_ns))
}
