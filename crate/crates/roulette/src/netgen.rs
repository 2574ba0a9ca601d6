//! Preferential-attachment network generator.
//!
//! Grows a network by attaching each new node to `m` distinct existing
//! nodes chosen with probability proportional to their degree. The degree
//! table is a live [`WeightTable`], so the growth loop doubles as a
//! stress workload for the selection engines: weights change every step
//! and the degree distribution develops the heavy tail that makes plain
//! acceptance selection progressively more expensive.
//!
//! Engine cost profile during growth:
//! * linear — no state, O(N) per draw;
//! * binary — prefix sums rebuilt once per growth step (documented O(N)
//!   cost per step);
//! * acceptance — O(1) updates; degrees only increase, so the tracked
//!   maximum stays exact with no rebuilds;
//! * hybrid — an incremental split at a fixed degree threshold: nodes are
//!   promoted into an exactly-sampled heavy set the moment their degree
//!   crosses `10 · m`, everything below is handled by acceptance against
//!   that constant bound. O(1) amortized per update, no per-step rebuild.

use std::collections::BTreeMap;
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::selectors::{
    AcceptanceEngine, AttemptStats, Draw, LinearScanEngine, PrefixSumEngine, Selector,
    DEFAULT_ATTEMPT_CAP,
};
use crate::table::WeightTable;

/// Which selection engine drives the degree-proportional target choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineKind {
    Linear,
    Binary,
    Acceptance,
    Hybrid,
}

/// A grown network: edge list plus the live degree table.
#[derive(Debug, Clone)]
pub struct GrowingNetwork {
    edges: Vec<(u32, u32)>,
    degrees: WeightTable,
    attempt_stats: AttemptStats,
    step_attempts: Vec<u64>,
}

impl GrowingNetwork {
    pub fn node_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Degree of each node, stored as weights so the selection engines
    /// can run against it directly.
    pub fn degrees(&self) -> &WeightTable {
        &self.degrees
    }

    pub fn max_degree(&self) -> u64 {
        self.degrees.max_bound() as u64
    }

    /// Attempt counters over every engine draw made during growth.
    pub fn attempt_stats(&self) -> AttemptStats {
        self.attempt_stats
    }

    /// Total proposals per growth step, aligned with the order nodes were
    /// added. Lets callers compare early-phase and late-phase engine cost.
    pub fn step_attempts(&self) -> &[u64] {
        &self.step_attempts
    }

    /// Build a network directly from an edge list (no growth); degrees
    /// are derived by counting endpoints.
    pub fn from_edges(node_count: usize, edges: Vec<(u32, u32)>) -> Result<Self> {
        let mut degrees = vec![0.0; node_count];
        for &(u, v) in &edges {
            let (u, v) = (u as usize, v as usize);
            if u >= node_count || v >= node_count {
                return Err(Error::IndexOutOfRange {
                    index: u.max(v),
                    len: node_count,
                });
            }
            degrees[u] += 1.0;
            degrees[v] += 1.0;
        }
        Ok(GrowingNetwork {
            edges,
            degrees: WeightTable::from_vec(degrees)?,
            attempt_stats: AttemptStats::new(),
            step_attempts: Vec::new(),
        })
    }

    /// Histogram of node degrees, sorted by degree ascending. Counts sum
    /// to the node count.
    pub fn degree_histogram(&self) -> Vec<(u64, usize)> {
        let mut hist: BTreeMap<u64, usize> = BTreeMap::new();
        for &w in self.degrees.weights() {
            *hist.entry(w as u64).or_insert(0) += 1;
        }
        hist.into_iter().collect()
    }

    /// Plain-text edge list: one `u v` pair per line, 0-based,
    /// newline-terminated.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        for &(u, v) in &self.edges {
            writeln!(out, "{u} {v}")?;
        }
        Ok(())
    }
}

/// Grow a network to `final_size` nodes.
///
/// Starts from a ring of `seed_nodes` nodes (each of degree 2; sizes 1
/// and 2 degenerate to a self-loop and a doubled edge, keeping the degree
/// invariant). Each new node then attaches `edges_per_node` edges to
/// distinct existing nodes chosen degree-proportionally; duplicate targets
/// within one step are rejected and redrawn, and all of the step's draws
/// see the table as it was when the step began.
pub fn grow(
    seed_nodes: usize,
    edges_per_node: usize,
    final_size: usize,
    engine: EngineKind,
    rng: &mut RandomSource,
) -> Result<GrowingNetwork> {
    if edges_per_node < 1 || seed_nodes < edges_per_node || final_size <= seed_nodes {
        return Err(Error::InvalidParameter(format!(
            "growth needs final_size > seed_nodes >= edges_per_node >= 1, \
             got final_size {final_size}, seed_nodes {seed_nodes}, edges_per_node {edges_per_node}"
        )));
    }

    let m = edges_per_node;
    let mut edges: Vec<(u32, u32)> =
        Vec::with_capacity(seed_nodes + m * (final_size - seed_nodes));
    match seed_nodes {
        1 => edges.push((0, 0)),
        2 => {
            edges.push((0, 1));
            edges.push((0, 1));
        }
        _ => {
            for i in 0..seed_nodes {
                edges.push((i as u32, ((i + 1) % seed_nodes) as u32));
            }
        }
    }
    let mut degrees = WeightTable::from_vec(vec![2.0; seed_nodes])?;

    let mut hybrid = match engine {
        EngineKind::Hybrid => Some(IncrementalHybrid::new(seed_nodes, 10.0 * m as f64)),
        _ => None,
    };
    let linear = LinearScanEngine::new();
    let acceptance = AcceptanceEngine::new();

    let mut attempt_stats = AttemptStats::new();
    let mut step_attempts = Vec::with_capacity(final_size - seed_nodes);
    let mut targets: Vec<usize> = Vec::with_capacity(m);

    for new_node in seed_nodes..final_size {
        // Binary search needs its prefix rebuilt against the current
        // degrees; that per-step O(N) cost is the point of the exercise.
        let prefix = match engine {
            EngineKind::Binary => Some(PrefixSumEngine::new(&degrees)),
            _ => None,
        };

        targets.clear();
        let mut attempts_this_step = 0;
        while targets.len() < m {
            let draw = match engine {
                EngineKind::Linear => linear.select(&degrees, rng)?,
                EngineKind::Binary => prefix.as_ref().unwrap().select(&degrees, rng)?,
                EngineKind::Acceptance => acceptance.select(&degrees, rng)?,
                EngineKind::Hybrid => hybrid.as_ref().unwrap().select(&degrees, rng)?,
            };
            attempt_stats.record(&draw);
            attempts_this_step += draw.attempts;
            if !targets.contains(&draw.index) {
                targets.push(draw.index);
            }
        }
        step_attempts.push(attempts_this_step);

        degrees.push_weight(m as f64)?;
        if let Some(h) = hybrid.as_mut() {
            h.on_push();
        }
        for &t in &targets {
            let bumped = degrees.weight(t) + 1.0;
            degrees.set_weight(t, bumped)?;
            if let Some(h) = hybrid.as_mut() {
                h.on_increase(t, bumped);
            }
            edges.push((new_node as u32, t as u32));
        }
        // Degree-sum identity; exact in f64 because degrees are integers.
        assert_eq!(
            degrees.total(),
            (2 * edges.len()) as f64,
            "degree sum diverged from 2·|edges| at node {new_node}"
        );
    }

    Ok(GrowingNetwork {
        edges,
        degrees,
        attempt_stats,
        step_attempts,
    })
}

/// Growth-time hybrid selector.
///
/// Unlike [`HybridEngine`](crate::HybridEngine), which snapshots its
/// partition, this one is built for a table whose integer weights only
/// ever increase: membership is decided by an absolute threshold, a node
/// moves into the heavy set the moment its weight crosses it, and the
/// heavy mass is tracked incrementally. The residual bound is therefore
/// always exact (`<= cut` by construction) and no rebuild ever happens.
#[derive(Debug, Clone)]
struct IncrementalHybrid {
    cut: f64,
    heavy: Vec<usize>,
    in_heavy: Vec<bool>,
    heavy_sum: f64,
}

impl IncrementalHybrid {
    fn new(node_count: usize, cut: f64) -> Self {
        IncrementalHybrid {
            cut,
            heavy: Vec::new(),
            in_heavy: vec![false; node_count],
            heavy_sum: 0.0,
        }
    }

    fn on_push(&mut self) {
        self.in_heavy.push(false);
    }

    fn on_increase(&mut self, index: usize, new_weight: f64) {
        if self.in_heavy[index] {
            self.heavy_sum += 1.0;
        } else if new_weight > self.cut {
            self.in_heavy[index] = true;
            self.heavy.push(index);
            self.heavy_sum += new_weight;
        }
    }

    fn select(&self, table: &WeightTable, rng: &mut RandomSource) -> Result<Draw> {
        let r = rng.uniform() * table.total();
        if r < self.heavy_sum {
            // Integer degrees make the running sum exact, so the scan
            // always terminates inside the set.
            let mut acc = 0.0;
            for &i in &self.heavy {
                acc += table.weight(i);
                if r < acc {
                    return Ok(Draw {
                        index: i,
                        attempts: 1,
                    });
                }
            }
            return Ok(Draw {
                index: *self.heavy.last().expect("heavy_sum > 0 implies members"),
                attempts: 1,
            });
        }
        let n = table.len();
        for attempt in 1..=DEFAULT_ATTEMPT_CAP {
            let index = rng.below(n);
            if self.in_heavy[index] {
                continue; // heavy mass is covered by the exact branch
            }
            let u = rng.uniform();
            if u < table.weight(index) / self.cut {
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
}
