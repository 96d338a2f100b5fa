//! Predecessor counting plus the in-weight fixing rule.
//!
//! When an open vertex `k` is first discovered from `z`, `in_weight[k]` is set
//! to the lightest arc into `k` from any other vertex. Any path to `k` that
//! has not been relaxed yet leaves some vertex whose cost is at least the
//! current open lower bound `d`, so `D[k] <= d + in_weight[k]` proves `D[k]`
//! optimal.

use crate::cost::Cost;
use crate::graph::Graph;
use crate::metrics::RunResult;
use crate::solver::{RunOptions, ShortestPathSolver, SolveError};
use crate::sp1::{arc_weight, run_pred_counting, FixingRule, Sp1State};

/// SP2 state: the SP1 state plus the write-once in-weights.
pub struct Sp2State {
    pub base: Sp1State,
    pub in_weight: Vec<Cost>,
}

impl Sp2State {
    pub fn new(g: &Graph, source: usize) -> Sp2State {
        Sp2State {
            base: Sp1State::new(g, source),
            in_weight: vec![Cost::INFINITY; g.n()],
        }
    }

    /// Handles arc `(z, k)` with fixed `z` and open `k`.
    pub fn process_edge2(&mut self, g: &Graph, z: usize, k: usize) -> Result<(), SolveError> {
        let w = arc_weight(g, z, k);
        process_edge2(&mut self.base, &mut self.in_weight, g, z, k, w)
    }
}

fn process_edge2(
    s: &mut Sp1State,
    in_weight: &mut [Cost],
    g: &Graph,
    z: usize,
    k: usize,
    w: u64,
) -> Result<(), SolveError> {
    s.pred[k] -= 1;

    // First discovery with other arcs still pending.
    if s.dist[k].is_infinite() && s.pred[k] > 0 {
        in_weight[k] = g
            .in_edges(k)
            .iter()
            .filter(|&&(v, _)| v != z)
            .map(|&(_, wv)| Cost::new(wv))
            .min()
            .unwrap_or(Cost::INFINITY);
    }

    let changed = s.relax(z, k, w);

    if s.pred[k] == 0 {
        s.fix(k, "predecessor count")
    } else if s.dist[k] <= s.open_lower_bound().plus(in_weight[k]) {
        s.fix(k, "in-weight bound")
    } else {
        s.defer(k, changed);
        Ok(())
    }
}

struct InWeightRule {
    in_weight: Vec<Cost>,
}

impl FixingRule for InWeightRule {
    const NAME: &'static str = "sp2";

    fn process_edge(&mut self, s: &mut Sp1State, g: &Graph, z: usize, k: usize, w: u64) -> Result<(), SolveError> {
        process_edge2(s, &mut self.in_weight, g, z, k, w)
    }
}

/// Runs SP2 and also returns the final in-weights.
pub fn run_sp2_detailed(
    g: &Graph,
    source: usize,
    opts: &RunOptions,
) -> Result<(RunResult, Vec<Cost>), SolveError> {
    let mut rule = InWeightRule {
        in_weight: vec![Cost::INFINITY; g.n()],
    };
    let result = run_pred_counting(g, source, opts, &mut rule)?;
    Ok((result, rule.in_weight))
}

pub fn run_sp2(g: &Graph, source: usize, opts: &RunOptions) -> Result<RunResult, SolveError> {
    run_sp2_detailed(g, source, opts).map(|(r, _)| r)
}

pub struct Sp2Solver;

impl ShortestPathSolver for Sp2Solver {
    fn name(&self) -> &'static str {
        "sp2"
    }

    fn description(&self) -> &'static str {
        "SP1 plus the in-weight fixing rule"
    }

    fn needs_pruning(&self) -> bool {
        true
    }

    fn solve(&self, graph: &Graph, source: usize, opts: &RunOptions) -> Result<RunResult, SolveError> {
        run_sp2(graph, source, opts)
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
    fn example_graph_run() {
        let (r, in_weight) = run_sp2_detailed(&example_graph(), 0, &debug()).unwrap();
        let expect: Vec<Cost> = [0, 9, 2, 8, 7].into_iter().map(Cost::new).collect();
        assert_eq!(r.dist, expect);
        assert_eq!(in_weight[2], Cost::new(1));
        assert_eq!(in_weight[3], Cost::new(6));
        assert_eq!(in_weight[4], Cost::new(5));
        assert_eq!(in_weight[0], Cost::INFINITY);
        assert_eq!(in_weight[1], Cost::INFINITY);
        assert_eq!(r.metrics.outer_iterations, 2);
    }

    #[test]
    fn example_graph_edge_steps() {
        let g = example_graph();
        let mut s = Sp2State::new(&g, 0);
        s.base.iteration = 1;
        s.base.fix(0, "heap minimum").unwrap();
        s.base.ready.pop();
        s.base.exploring = Cost::ZERO;
        s.process_edge2(&g, 0, 1).unwrap();
        assert!(s.base.fixed[1]);
        // 2 <= 0 + 1 fails, so 2 waits in Q
        s.process_edge2(&g, 0, 2).unwrap();
        assert_eq!(s.base.dist[2], Cost::new(2));
        assert_eq!(s.in_weight[2], Cost::new(1));
        assert!(!s.base.fixed[2] && s.base.in_deferred(2));

        s.base.ready.pop();
        s.base.exploring = Cost::new(9);
        s.process_edge2(&g, 1, 3).unwrap();
        s.process_edge2(&g, 1, 4).unwrap();
        assert_eq!(s.in_weight[3], Cost::new(6));
        assert_eq!(s.in_weight[4], Cost::new(5));
        assert!(!s.base.fixed[3] && !s.base.fixed[4]);
        s.base.exploring = Cost::INFINITY;
        for v in s.base.deferred.take() {
            s.base.heap.insert_or_adjust(v, s.base.dist[v]).unwrap();
        }

        let fixed = &s.base.fixed;
        let (j, d) = s.base.heap.remove_min(|v| fixed[v]).unwrap();
        assert_eq!((j, d), (2, Cost::new(2)));
        s.base.phase_floor = s.base.heap.peek_key();
        s.base.fix(2, "heap minimum").unwrap();
        s.base.ready.pop();
        s.base.exploring = Cost::new(2);
        // 8 <= 2 + 6
        s.process_edge2(&g, 2, 3).unwrap();
        assert_eq!(s.base.dist[3], Cost::new(8));
        assert!(s.base.fixed[3]);
        s.process_edge2(&g, 2, 4).unwrap();
        assert!(s.base.fixed[4]);
        assert_eq!(s.base.dist[4], Cost::new(7));
    }

    #[test]
    fn single_in_arc_fixes_by_count() {
        let g = Graph::build(2, &[(0, 1, 5)]).unwrap();
        let mut s = Sp2State::new(&g, 0);
        s.base.fixed[0] = true;
        s.process_edge2(&g, 0, 1).unwrap();
        assert!(s.base.fixed[1]);
        assert_eq!(s.in_weight[1], Cost::INFINITY);
    }

    #[test]
    fn unweighted_graph_is_breadth_first() {
        let g = Graph::build(
            6,
            &[(0, 1, 1), (0, 2, 1), (1, 3, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1), (5, 3, 1), (2, 5, 1)],
        )
        .unwrap();
        let r = run_sp2(&g, 0, &debug()).unwrap();
        assert_eq!(r.metrics.heap_inserts, 1);
        assert_eq!(r.metrics.heap_remove_mins, 1);
        assert_eq!(r.metrics.outer_iterations, 1);
    }

    /// A 2x4 grid where fixing vertex 5 early lets it reach 6 before 2 does,
    /// so 6 enters H at 152 and is adjusted to 116. SP1 explores 2 first and
    /// inserts 6 once, so here SP2 performs one more heap operation.
    #[test]
    fn early_fix_can_cost_an_adjust() {
        let out: [&[(usize, i64)]; 8] = [
            &[(1, 29), (4, 76)],
            &[(0, 42), (2, 50), (5, 51)],
            &[(1, 26), (3, 75), (6, 37)],
            &[(2, 38), (7, 30)],
            &[(0, 41), (5, 8)],
            &[(1, 64), (4, 58), (6, 72)],
            &[(2, 65), (5, 69), (7, 73)],
            &[(3, 41), (6, 26)],
        ];
        let edges: Vec<_> = (0..8).flat_map(|u| out[u].iter().map(move |&(v, w)| (u, v, w))).collect();
        let g = crate::graph::Graph::build(8, &edges).unwrap();
        let sp1 = crate::sp1::run_sp1(&g, 0, &debug()).unwrap();
        let sp2 = run_sp2(&g, 0, &debug()).unwrap();
        assert_eq!(sp1.dist, sp2.dist);
        assert_eq!(sp2.fixed_at_iteration[5], Some(3));
        assert_eq!(sp2.fixed_at_iteration[2], Some(4));
        assert_eq!(sp1.metrics.heap_adjusts, 0);
        assert_eq!(sp2.metrics.heap_adjusts, 1);
        assert_eq!((sp1.metrics.heap_ops(), sp2.metrics.heap_ops()), (15, 16));
    }
}
