use std::time::Duration;

use serde::{Serialize, Serializer};

use crate::cost::Cost;
use crate::heap::HeapStats;

/// Work counters for one solver run.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Metrics {
    pub heap_inserts: u64,
    pub heap_adjusts: u64,
    pub heap_remove_mins: u64,
    pub relaxations: u64,
    /// Outer-loop iterations that fixed at least one vertex (heap-based
    /// solvers) or full passes (oracle).
    pub outer_iterations: u64,
    /// Number of vertices fixed in each outer iteration or round.
    pub frontier_sizes: Vec<u64>,
    /// Synchronous rounds (round-based solver only).
    pub rounds: u64,
    /// Edge relaxations per round (round-based solver only).
    pub round_relaxations: Vec<u64>,
    #[serde(rename = "wall_time_ms", serialize_with = "millis")]
    pub wall_time: Duration,
}

fn millis<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

impl Metrics {
    pub fn heap_ops(&self) -> u64 {
        self.heap_inserts + self.heap_adjusts + self.heap_remove_mins
    }

    pub fn max_frontier(&self) -> u64 {
        self.frontier_sizes.iter().copied().max().unwrap_or(0)
    }

    pub fn total_fixed(&self) -> u64 {
        self.frontier_sizes.iter().sum()
    }

    pub(crate) fn add_heap(&mut self, stats: HeapStats) {
        self.heap_inserts += stats.inserts;
        self.heap_adjusts += stats.adjusts;
        self.heap_remove_mins += stats.remove_mins;
    }
}

/// Final distances plus instrumentation for one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult {
    pub dist: Vec<Cost>,
    pub metrics: Metrics,
    /// 1-based iteration (or round) in which each vertex was fixed.
    pub fixed_at_iteration: Vec<Option<u32>>,
}

impl RunResult {
    pub fn fixed_count(&self) -> usize {
        self.fixed_at_iteration.iter().filter(|f| f.is_some()).count()
    }

    pub fn reachable_count(&self) -> usize {
        self.dist.iter().filter(|d| d.is_finite()).count()
    }
}
