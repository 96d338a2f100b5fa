//! Baseline Dijkstra with an addressable heap, instrumented for comparison.

use std::time::Instant;

use crate::cost::Cost;
use crate::graph::Graph;
use crate::heap::IndexedHeap;
use crate::invariants::Checker;
use crate::metrics::{Metrics, RunResult};
use crate::solver::{check_source, RunOptions, ShortestPathSolver, SolveError};

const NAME: &str = "dijkstra";

pub fn run_dijkstra(g: &Graph, source: usize, opts: &RunOptions) -> Result<RunResult, SolveError> {
    check_source(g, source)?;
    let start = Instant::now();
    let n = g.n();
    let checker = opts.debug_invariants.then(|| Checker::new(NAME, g, source));

    let mut dist = vec![Cost::INFINITY; n];
    let mut fixed = vec![false; n];
    let mut fixed_at = vec![None; n];
    let mut heap = IndexedHeap::new(n);
    let mut metrics = Metrics::default();
    let mut last_key = Cost::ZERO;

    dist[source] = Cost::ZERO;
    heap.insert_or_adjust(source, Cost::ZERO)?;

    while !heap.is_empty() {
        if let Some(chk) = &checker {
            chk.fixed_are_exact(|v| fixed[v], |v| dist[v], "outer loop")?;
            for v in 0..n {
                let expect = dist[v].is_finite() && !fixed[v];
                if heap.contains(v) != expect {
                    return Err(chk.fail(format!(
                        "vertex {v}: in heap = {}, discovered and non-fixed = {expect}",
                        heap.contains(v)
                    )));
                }
            }
        }

        let (j, d) = heap.remove_min(|v| fixed[v])?;
        if checker.is_some() && d < last_key {
            return Err(SolveError::invariant(NAME, format!("removeMin keys went from {last_key} down to {d}")));
        }
        last_key = d;

        metrics.outer_iterations += 1;
        fixed[j] = true;
        fixed_at[j] = Some(metrics.outer_iterations as u32);
        metrics.frontier_sizes.push(1);

        for &(k, w) in g.out_edges(j) {
            if fixed[k] {
                continue;
            }
            metrics.relaxations += 1;
            let cand = dist[j].plus_weight(w);
            if cand < dist[k] {
                dist[k] = cand;
                heap.insert_or_adjust(k, cand)?;
            }
        }
    }

    metrics.add_heap(heap.stats());
    metrics.wall_time = start.elapsed();
    Ok(RunResult {
        dist,
        metrics,
        fixed_at_iteration: fixed_at,
    })
}

pub struct DijkstraSolver;

impl ShortestPathSolver for DijkstraSolver {
    fn name(&self) -> &'static str {
        NAME
    }

    fn description(&self) -> &'static str {
        "binary-heap Dijkstra, one vertex fixed per iteration"
    }

    fn solve(&self, graph: &Graph, source: usize, opts: &RunOptions) -> Result<RunResult, SolveError> {
        run_dijkstra(graph, source, opts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::example_graph;

    fn debug() -> RunOptions {
        RunOptions {
            debug_invariants: true,
            parallel: false,
        }
    }

    #[test]
    fn example_graph_distances_and_counts() {
        let r = run_dijkstra(&example_graph(), 0, &debug()).unwrap();
        let expect: Vec<Cost> = [0, 9, 2, 8, 7].into_iter().map(Cost::new).collect();
        assert_eq!(r.dist, expect);
        assert_eq!(r.metrics.heap_inserts, 5);
        assert_eq!(r.metrics.heap_remove_mins, 5);
        assert_eq!(r.metrics.heap_adjusts, 0);
        assert_eq!(r.metrics.outer_iterations, 5);
        // settle order 0, 2, 4, 3, 1
        assert_eq!(r.fixed_at_iteration, vec![Some(1), Some(5), Some(2), Some(4), Some(3)]);
    }

    #[test]
    fn single_vertex() {
        let g = Graph::build(1, &[]).unwrap();
        let r = run_dijkstra(&g, 0, &debug()).unwrap();
        assert_eq!(r.dist, vec![Cost::ZERO]);
    }

    #[test]
    fn adjusts_are_counted() {
        let g = Graph::build(3, &[(0, 1, 1), (0, 2, 10), (1, 2, 1)]).unwrap();
        let r = run_dijkstra(&g, 0, &debug()).unwrap();
        assert_eq!(r.dist[2], Cost::new(2));
        assert_eq!(r.metrics.heap_adjusts, 1);
    }

    #[test]
    fn unreachable_vertices_stay_infinite() {
        let g = Graph::build(3, &[(0, 1, 1), (2, 1, 1)]).unwrap();
        let r = run_dijkstra(&g, 0, &debug()).unwrap();
        assert_eq!(r.dist[2], Cost::INFINITY);
        assert_eq!(r.fixed_at_iteration[2], None);
    }
}
