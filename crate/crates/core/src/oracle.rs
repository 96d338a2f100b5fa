//! Bellman-Ford reference distances.
//!
//! Written against raw `Option<u64>` arithmetic and the plain edge list so it
//! shares no relaxation code with the solvers it checks.

use std::time::Instant;

use crate::cost::Cost;
use crate::graph::Graph;
use crate::metrics::{Metrics, RunResult};
use crate::solver::{check_source, RunOptions, ShortestPathSolver, SolveError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub dist: Vec<Cost>,
    /// Full passes over the edge list, including the final pass that changed
    /// nothing.
    pub iterations: u64,
}

/// Synchronous Bellman-Ford: every pass relaxes all arcs from the distances
/// of the previous pass, stopping after the first pass with no change. The
/// pass count is therefore the hop depth of the shortest-path tree plus one,
/// independent of edge order.
pub fn bellman_ford_oracle(g: &Graph, source: usize) -> OracleResult {
    let n = g.n();
    let edges: Vec<(usize, usize, u64)> = g.edges().collect();
    let mut prev: Vec<Option<u64>> = vec![None; n];
    prev[source] = Some(0);
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mut next = prev.clone();
        let mut changed = false;
        for &(u, v, w) in &edges {
            let Some(du) = prev[u] else { continue };
            let cand = du + w;
            if next[v].is_none_or(|dv| cand < dv) {
                next[v] = Some(cand);
                changed = true;
            }
        }
        prev = next;
        if !changed || iterations > n as u64 {
            break;
        }
    }
    OracleResult {
        dist: prev.into_iter().map(|d| d.map_or(Cost::INFINITY, Cost::new)).collect(),
        iterations,
    }
}

/// Checks Bellman's optimality conditions: no arc can improve a distance,
/// the source is at 0, and every other reachable vertex has a tight in-arc.
pub fn check_optimality(g: &Graph, source: usize, dist: &[Cost]) -> Result<(), String> {
    if dist.len() != g.n() {
        return Err(format!("{} distances for {} vertices", dist.len(), g.n()));
    }
    if dist[source] != Cost::ZERO {
        return Err(format!("source distance is {}", dist[source]));
    }
    for (u, v, w) in g.edges() {
        if let Some(du) = dist[u].value() {
            if dist[v].value().is_none_or(|dv| dv > du + w) {
                return Err(format!("arc ({u}, {v}, {w}) improves {v}: {} > {}", dist[v], du + w));
            }
        }
    }
    for v in (0..g.n()).filter(|&v| v != source) {
        let Some(dv) = dist[v].value() else { continue };
        let tight = g
            .in_edges(v)
            .iter()
            .any(|&(u, w)| dist[u].value().is_some_and(|du| du + w == dv));
        if !tight {
            return Err(format!("vertex {v} at {dv} has no tight incoming arc"));
        }
    }
    Ok(())
}

/// The oracle exposed through the solver interface.
pub struct BellmanFordSolver;

impl ShortestPathSolver for BellmanFordSolver {
    fn name(&self) -> &'static str {
        "oracle"
    }

    fn description(&self) -> &'static str {
        "synchronous Bellman-Ford with early exit"
    }

    fn solve(&self, graph: &Graph, source: usize, _opts: &RunOptions) -> Result<RunResult, SolveError> {
        check_source(graph, source)?;
        let start = Instant::now();
        let OracleResult { dist, iterations } = bellman_ford_oracle(graph, source);
        let metrics = Metrics {
            relaxations: iterations * graph.m() as u64,
            outer_iterations: iterations,
            wall_time: start.elapsed(),
            ..Metrics::default()
        };
        Ok(RunResult {
            fixed_at_iteration: vec![None; graph.n()],
            dist,
            metrics,
        })
    }
}
