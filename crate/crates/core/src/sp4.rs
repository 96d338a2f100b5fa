//! Synchronous rounds in the style of Bellman-Ford, with lower bounds.
//!
//! Each round reads only the state left by the previous step, so a round is
//! a pure function of the state at its start and the parallel mode gives
//! the same snapshots as the sequential one.
//!
//! Step 1 takes two minima over open vertices: `threshold` over
//! `D + outWeight` and `minD` over `D`. Fixed vertices whose `D` dropped in
//! the previous round have arcs that were never relaxed with that value, so
//! they also contribute `D + outWeight` to both minima.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::cost::Cost;
use crate::graph::Graph;
use crate::invariants::Checker;
use crate::metrics::{Metrics, RunResult};
use crate::solver::{check_source, RunOptions, ShortestPathSolver, SolveError};
use crate::sp3::compute_out_weights;

const NAME: &str = "sp4";

/// State after a round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sp4Snapshot {
    pub threshold: Cost,
    pub min_d: Cost,
    pub d: Vec<Cost>,
    pub c: Vec<Cost>,
    pub fixed: Vec<bool>,
}

pub struct Sp4State {
    pub d: Vec<Cost>,
    pub c: Vec<Cost>,
    pub fixed: Vec<bool>,
    /// `D` dropped in the latest relaxation step.
    pub fresh: Vec<bool>,
    pub dout: Vec<Cost>,
    out_weight: Vec<Cost>,
    pub changed: bool,
    pub round_count: u32,
    pub threshold: Cost,
    pub min_d: Cost,
    fixed_at: Vec<Option<u32>>,
    parallel: bool,
    checker: Option<Checker>,
}

fn per_vertex<T: Send>(n: usize, parallel: bool, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    if parallel {
        (0..n).into_par_iter().map(f).collect()
    } else {
        (0..n).map(f).collect()
    }
}

impl Sp4State {
    pub fn new(g: &Graph, source: usize, parallel: bool) -> Sp4State {
        let n = g.n();
        let out_weight = compute_out_weights(g);
        let mut s = Sp4State {
            d: vec![Cost::INFINITY; n],
            c: vec![Cost::ZERO; n],
            fixed: vec![false; n],
            fresh: vec![false; n],
            dout: vec![Cost::INFINITY; n],
            out_weight,
            changed: true,
            round_count: 0,
            threshold: Cost::INFINITY,
            min_d: Cost::INFINITY,
            fixed_at: vec![None; n],
            parallel,
            checker: None,
        };
        s.d[source] = Cost::ZERO;
        s.dout[source] = s.out_weight[source];
        s.fresh[source] = true;
        s
    }

    fn fresh_fixed(&self, x: usize) -> bool {
        self.fixed[x] && self.fresh[x]
    }

    /// The loop guard: something changed, and either an open vertex is
    /// discovered or some freshly lowered fixed vertex still has an arc
    /// into an open one.
    pub fn should_continue(&self, g: &Graph) -> bool {
        self.changed
            && (0..g.n()).any(|x| {
                (!self.fixed[x] && self.d[x].is_finite())
                    || (self.fresh_fixed(x) && g.out_edges(x).iter().any(|&(y, _)| !self.fixed[y]))
            })
    }

    fn fix(&mut self, x: usize, rule: &str) -> Result<(), SolveError> {
        if let Some(chk) = &self.checker {
            chk.on_fix(x, self.d[x], rule)?;
        }
        self.fixed[x] = true;
        self.c[x] = self.d[x];
        self.fixed_at[x] = Some(self.round_count);
        Ok(())
    }

    fn check_bounds(&mut self, at: &str) -> Result<(), SolveError> {
        let Some(mut chk) = self.checker.take() else { return Ok(()) };
        let res = chk.bounds(|v| self.fixed[v], |v| self.c[v], |v| self.d[v], at);
        self.checker = Some(chk);
        res
    }

    /// One round; returns the number of vertices fixed and arcs relaxed.
    pub fn round(&mut self, g: &Graph) -> Result<(u64, u64), SolveError> {
        let n = g.n();
        self.round_count += 1;

        // Step 1
        let pending = per_vertex(n, self.parallel, |x| {
            if !self.fixed[x] {
                (self.dout[x], self.d[x])
            } else if self.fresh[x] {
                let k = self.d[x].plus(self.out_weight[x]);
                (k, k)
            } else {
                (Cost::INFINITY, Cost::INFINITY)
            }
        });
        self.threshold = pending.iter().map(|p| p.0).min().unwrap_or(Cost::INFINITY);
        self.min_d = pending.iter().map(|p| p.1).min().unwrap_or(Cost::INFINITY);

        // Step 2
        let mut fixed_now = 0;
        for x in 0..n {
            if !self.fixed[x] && self.d[x].is_finite() && self.d[x] <= self.threshold {
                self.fix(x, "threshold")?;
                fixed_now += 1;
            }
        }

        // Step 3: every arc out of a discovered vertex into an open one.
        let relaxed = per_vertex(n, self.parallel, |y| {
            if self.fixed[y] {
                return (self.d[y], 0u64);
            }
            let mut best = self.d[y];
            let mut count = 0;
            for &(x, w) in g.in_edges(y) {
                if self.d[x].is_finite() {
                    count += 1;
                    best = best.min(self.d[x].plus_weight(w));
                }
            }
            (best, count)
        });
        let mut relaxations = 0;
        self.changed = false;
        for (y, (best, count)) in relaxed.into_iter().enumerate() {
            relaxations += count;
            self.fresh[y] = best < self.d[y];
            if self.fresh[y] {
                self.d[y] = best;
                self.dout[y] = best.plus(self.out_weight[y]);
                self.changed = true;
            }
        }

        // Step 4, phase A
        if self.min_d.is_finite() {
            for y in 0..n {
                if !self.fixed[y] {
                    self.c[y] = self.c[y].max(self.min_d);
                }
            }
        }
        // Step 4, phase B, from the phase A values only.
        let raised = per_vertex(n, self.parallel, |y| {
            if self.fixed[y] {
                return self.c[y];
            }
            g.in_edges(y)
                .iter()
                .map(|&(x, w)| self.c[x].plus_weight(w))
                .min()
                .map_or(self.c[y], |b| self.c[y].max(b))
        });
        self.c = raised;

        // Step 5
        for y in 0..n {
            if !self.fixed[y] && self.d[y].is_finite() && self.c[y] == self.d[y] {
                self.fix(y, "bounds meet")?;
                fixed_now += 1;
            }
        }
        Ok((fixed_now, relaxations))
    }

    /// After a round without any change in `D`, every discovered vertex holds
    /// its cost. Returns how many open vertices this fixes.
    fn settle_quiet(&mut self) -> Result<u64, SolveError> {
        let mut count = 0;
        for x in 0..self.d.len() {
            if !self.fixed[x] && self.d[x].is_finite() {
                self.fix(x, "no change")?;
                count += 1;
            }
        }
        Ok(count)
    }

    fn snapshot(&self) -> Sp4Snapshot {
        Sp4Snapshot {
            threshold: self.threshold,
            min_d: self.min_d,
            d: self.d.clone(),
            c: self.c.clone(),
            fixed: self.fixed.clone(),
        }
    }
}

/// Runs SP4 and returns the state after every round.
pub fn run_sp4_traced(
    g: &Graph,
    source: usize,
    opts: &RunOptions,
) -> Result<(RunResult, Vec<Sp4Snapshot>), SolveError> {
    check_source(g, source)?;
    let start = Instant::now();
    let mut s = Sp4State::new(g, source, opts.parallel);
    if opts.debug_invariants {
        s.checker = Some(Checker::new(NAME, g, source));
    }
    let mut metrics = Metrics::default();
    let mut trace = Vec::new();

    while s.should_continue(g) {
        s.check_bounds("round start")?;
        let (fixed_now, relaxations) = s.round(g)?;
        metrics.frontier_sizes.push(fixed_now);
        metrics.round_relaxations.push(relaxations);
        metrics.relaxations += relaxations;
        trace.push(s.snapshot());
    }
    if !s.changed {
        let late = s.settle_quiet()?;
        if let Some(last) = metrics.frontier_sizes.last_mut() {
            *last += late;
        }
        if let Some(last) = trace.last_mut() {
            *last = s.snapshot();
        }
    }
    s.check_bounds("termination")?;
    if let Some(chk) = &s.checker {
        if s.round_count as usize > g.n() {
            return Err(chk.fail(format!("{} rounds on {} vertices", s.round_count, g.n())));
        }
    }

    metrics.rounds = s.round_count as u64;
    metrics.outer_iterations = s.round_count as u64;
    metrics.wall_time = start.elapsed();
    Ok((
        RunResult {
            dist: s.d,
            metrics,
            fixed_at_iteration: s.fixed_at,
        },
        trace,
    ))
}

pub fn run_sp4(g: &Graph, source: usize, opts: &RunOptions) -> Result<RunResult, SolveError> {
    run_sp4_traced(g, source, opts).map(|(r, _)| r)
}

pub struct Sp4Solver;

impl ShortestPathSolver for Sp4Solver {
    fn name(&self) -> &'static str {
        NAME
    }

    fn description(&self) -> &'static str {
        "synchronous rounds with lower and upper bounds"
    }

    fn needs_pruning(&self) -> bool {
        true
    }

    fn supports_parallel(&self) -> bool {
        true
    }

    fn solve(&self, graph: &Graph, source: usize, opts: &RunOptions) -> Result<RunResult, SolveError> {
        run_sp4(graph, source, opts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::example_graph;

    fn costs(v: &[u64]) -> Vec<Cost> {
        v.iter().map(|&x| Cost::new(x)).collect()
    }

    fn opts(parallel: bool) -> RunOptions {
        RunOptions {
            debug_invariants: true,
            parallel,
        }
    }

    #[test]
    fn example_graph_first_round() {
        let g = example_graph();
        let mut s = Sp4State::new(&g, 0, false);
        s.round(&g).unwrap();
        assert_eq!(s.threshold, Cost::new(2));
        assert_eq!(s.min_d, Cost::ZERO);
        assert_eq!(&s.d[..3], &costs(&[0, 9, 2])[..]);
        assert!(s.d[3].is_infinite() && s.d[4].is_infinite());
        assert_eq!(s.c, costs(&[0, 9, 1, 3, 2]));
        assert_eq!(s.fixed, vec![true, true, false, false, false]);
    }

    #[test]
    fn example_graph_two_rounds() {
        for parallel in [false, true] {
            let (r, trace) = run_sp4_traced(&example_graph(), 0, &opts(parallel)).unwrap();
            assert_eq!(r.dist, costs(&[0, 9, 2, 8, 7]));
            assert_eq!(r.metrics.rounds, 2);
            assert_eq!(r.metrics.frontier_sizes, vec![2, 3]);
            assert_eq!(trace[1].threshold, Cost::new(7));
            assert_eq!(trace[1].min_d, Cost::new(2));
        }
    }

    #[test]
    fn single_vertex_takes_one_round() {
        let g = Graph::build(1, &[]).unwrap();
        let r = run_sp4(&g, 0, &opts(false)).unwrap();
        assert_eq!(r.metrics.rounds, 1);
        assert_eq!(r.dist, vec![Cost::ZERO]);
    }

    #[test]
    fn undiscovered_vertices_are_never_fixed() {
        let g = Graph::build(4, &[(0, 1, 2), (2, 3, 1), (3, 2, 1)]).unwrap();
        let r = run_sp4(&g, 0, &opts(false)).unwrap();
        assert_eq!(r.fixed_at_iteration[2], None);
        assert_eq!(r.fixed_at_iteration[3], None);
        assert_eq!(r.dist[1], Cost::new(2));
    }

    #[test]
    fn long_chain_finishes() {
        let edges: Vec<(usize, usize, i64)> = (0..30).map(|i| (i, i + 1, 1 + (i as i64 % 3))).collect();
        let g = Graph::build(31, &edges).unwrap();
        let r = run_sp4(&g, 0, &opts(false)).unwrap();
        assert_eq!(r.fixed_count(), 31);
        assert!(r.metrics.rounds <= 31);
    }

    #[test]
    fn modes_give_identical_traces() {
        let g = Graph::build(
            6,
            &[(0, 1, 4), (0, 2, 1), (2, 1, 2), (1, 3, 5), (2, 3, 8), (3, 4, 3), (4, 5, 1), (1, 5, 20), (5, 2, 2)],
        )
        .unwrap();
        let (a, ta) = run_sp4_traced(&g, 0, &opts(false)).unwrap();
        let (b, tb) = run_sp4_traced(&g, 0, &opts(true)).unwrap();
        assert_eq!(a.dist, b.dist);
        assert_eq!(ta, tb);
    }
}
