//! Repeated timed runs and the summaries the bench command prints.

use serde::Serialize;

use crate::graph::Graph;
use crate::metrics::RunResult;
use crate::solver::{run_on_original, RunOptions, ShortestPathSolver, SolveError};

/// One CSV row: a solver on a graph, counters from the first repetition and
/// the median wall time over all of them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub graph: String,
    pub algorithm: String,
    pub n: usize,
    pub m: usize,
    pub heap_ops: u64,
    pub relaxations: u64,
    pub iterations: u64,
    pub rounds: u64,
    pub max_frontier: u64,
    pub reps: usize,
    pub wall_time_ms: f64,
}

pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty(), "median of nothing");
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2.0
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    assert!(points.len() >= 2, "need two points for a slope");
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Runs `solver` `reps` times (at least once) on the original graph.
pub fn bench_solver(
    solver: &dyn ShortestPathSolver,
    label: &str,
    graph: &Graph,
    source: usize,
    reps: usize,
    opts: &RunOptions,
) -> Result<(BenchRow, RunResult), SolveError> {
    let reps = reps.max(1);
    let mut times = Vec::with_capacity(reps);
    let mut first = None;
    for _ in 0..reps {
        let run = run_on_original(solver, graph, source, opts)?;
        times.push(run.result.metrics.wall_time.as_secs_f64() * 1e3);
        first.get_or_insert(run.result);
    }
    let r = first.expect("at least one repetition");
    let m = &r.metrics;
    let row = BenchRow {
        graph: label.to_string(),
        algorithm: solver.name().to_string(),
        n: graph.n(),
        m: graph.m(),
        heap_ops: m.heap_ops(),
        relaxations: m.relaxations,
        iterations: m.outer_iterations,
        rounds: m.rounds,
        max_frontier: m.max_frontier(),
        reps,
        // Microsecond resolution keeps CSV cells short.
        wall_time_ms: (median(&mut times) * 1e3).round() / 1e3,
    };
    Ok((row, r))
}
