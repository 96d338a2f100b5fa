//! Dijkstra with predecessor counting.
//!
//! Each vertex carries the number of its incoming arcs that have not been
//! relaxed yet. When that count reaches zero the vertex is fixed on the spot
//! and pushed onto the R worklist, so one heap extraction can settle a whole
//! cascade of vertices. Heap writes for vertices that are still open are
//! batched in Q and applied once R drains.
//!
//! The outer loop, R phase and Q flush live in [`run_pred_counting`] and are
//! shared with SP2, which only swaps the per-arc fixing rule.

use std::time::Instant;

use crate::cost::Cost;
use crate::frontier::{Deferred, Worklist};
use crate::graph::Graph;
use crate::heap::IndexedHeap;
use crate::invariants::Checker;
use crate::metrics::{Metrics, RunResult};
use crate::solver::{check_source, RunOptions, ShortestPathSolver, SolveError};

/// Mutable state of one SP1/SP2 run.
pub struct Sp1State {
    pub dist: Vec<Cost>,
    pub fixed: Vec<bool>,
    /// Incoming arcs not yet relaxed.
    pub pred: Vec<u32>,
    pub(crate) heap: IndexedHeap,
    pub(crate) ready: Worklist,
    pub(crate) deferred: Deferred,
    pub(crate) fixed_at: Vec<Option<u32>>,
    pub(crate) iteration: u32,
    pub(crate) fixed_this_iteration: u64,
    pub(crate) relaxations: u64,
    /// Heap root key right after this phase's extraction.
    pub(crate) phase_floor: Cost,
    /// Upper bound of the vertex whose arcs are being relaxed.
    pub(crate) exploring: Cost,
    explored: Vec<bool>,
    pub(crate) checker: Option<Checker>,
}

impl Sp1State {
    pub fn new(g: &Graph, source: usize) -> Sp1State {
        let n = g.n();
        let mut s = Sp1State {
            dist: vec![Cost::INFINITY; n],
            fixed: vec![false; n],
            pred: (0..n).map(|v| g.in_degree(v) as u32).collect(),
            heap: IndexedHeap::new(n),
            ready: Worklist::new(),
            deferred: Deferred::new(n),
            fixed_at: vec![None; n],
            iteration: 0,
            fixed_this_iteration: 0,
            relaxations: 0,
            phase_floor: Cost::INFINITY,
            exploring: Cost::INFINITY,
            explored: vec![false; n],
            checker: None,
        };
        s.dist[source] = Cost::ZERO;
        s
    }

    /// Whether `v` waits in R for exploration.
    pub fn in_ready(&self, v: usize) -> bool {
        self.ready.contains(v)
    }

    /// Whether `v` waits in Q for a heap update.
    pub fn in_deferred(&self, v: usize) -> bool {
        self.deferred.contains(v)
    }

    /// A lower bound on the cost of every open vertex and of every fixed
    /// vertex whose arcs have not all been relaxed.
    ///
    /// Open vertices not touched in this phase sit in the heap at their
    /// current bound, which is at least the root key; touched ones are
    /// covered by Q's floor. A path into an open vertex that has not been
    /// relaxed yet leaves from a vertex in R or from the one being explored.
    pub fn open_lower_bound(&self) -> Cost {
        self.phase_floor
            .min(self.deferred.floor())
            .min(self.ready.min_key())
            .min(self.exploring)
    }

    pub(crate) fn fix(&mut self, v: usize, rule: &str) -> Result<(), SolveError> {
        if let Some(chk) = &self.checker {
            chk.on_fix(v, self.dist[v], rule)?;
        }
        self.fixed[v] = true;
        self.fixed_at[v] = Some(self.iteration);
        self.fixed_this_iteration += 1;
        self.heap.mark_fixed(v);
        self.ready.push(v, self.dist[v]);
        Ok(())
    }

    /// Relaxes `(z, k)` and returns whether `dist[k]` dropped.
    #[inline]
    pub(crate) fn relax(&mut self, z: usize, k: usize, w: u64) -> bool {
        self.relaxations += 1;
        let cand = self.dist[z].plus_weight(w);
        if cand < self.dist[k] {
            self.dist[k] = cand;
            true
        } else {
            false
        }
    }

    /// Q bookkeeping for an open vertex after relaxation.
    #[inline]
    pub(crate) fn defer(&mut self, k: usize, changed: bool) {
        if changed {
            self.deferred.note_lowered(self.dist[k]);
            self.deferred.insert(k);
        }
    }

    /// Handles arc `(z, k)` with fixed `z` and open `k` under the
    /// predecessor-count rule.
    pub fn process_edge1(&mut self, g: &Graph, z: usize, k: usize) -> Result<(), SolveError> {
        let w = arc_weight(g, z, k);
        self.process_edge1_weighted(z, k, w)
    }

    pub(crate) fn process_edge1_weighted(&mut self, z: usize, k: usize, w: u64) -> Result<(), SolveError> {
        self.pred[k] -= 1;
        let changed = self.relax(z, k, w);
        if self.pred[k] == 0 {
            self.fix(k, "predecessor count")
        } else {
            self.defer(k, changed);
            Ok(())
        }
    }

    fn check_outer(&self, g: &Graph) -> Result<(), SolveError> {
        let Some(chk) = &self.checker else { return Ok(()) };
        chk.fixed_are_exact(|v| self.fixed[v], |v| self.dist[v], "outer loop")?;
        self.heap.check_invariants(|v| self.fixed[v]).map_err(|e| chk.fail(e))?;
        for v in 0..g.n() {
            let open = self.dist[v].is_finite() && !self.fixed[v];
            if open && !self.heap.contains(v) {
                return Err(chk.fail(format!("outer loop: open vertex {v} missing from the heap")));
            }
            if self.heap.contains(v) && !(open || self.explored[v]) {
                return Err(chk.fail(format!("outer loop: heap holds unexplored fixed vertex {v}")));
            }
        }
        Ok(())
    }

    fn check_inner(&self, g: &Graph) -> Result<(), SolveError> {
        let Some(chk) = &self.checker else { return Ok(()) };
        chk.fixed_are_exact(|v| self.fixed[v], |v| self.dist[v], "inner loop")?;
        for v in 0..g.n() {
            let open = self.dist[v].is_finite() && !self.fixed[v];
            if open && !self.heap.contains(v) && !self.deferred.contains(v) {
                return Err(chk.fail(format!("inner loop: open vertex {v} in neither H nor Q")));
            }
            let waiting = self.fixed[v] && !self.explored[v];
            if self.ready.contains(v) != waiting {
                return Err(chk.fail(format!(
                    "inner loop: vertex {v} in R = {}, fixed and unexplored = {waiting}",
                    self.ready.contains(v)
                )));
            }
        }
        Ok(())
    }
}

pub(crate) fn arc_weight(g: &Graph, z: usize, k: usize) -> u64 {
    g.out_edges(z)
        .iter()
        .find(|&&(t, _)| t == k)
        .map(|&(_, w)| w)
        .unwrap_or_else(|| panic!("({z}, {k}) is not an arc"))
}

/// Per-arc fixing rule plugged into the shared SP1/SP2 driver.
pub(crate) trait FixingRule {
    const NAME: &'static str;

    fn process_edge(&mut self, s: &mut Sp1State, g: &Graph, z: usize, k: usize, w: u64) -> Result<(), SolveError>;
}

pub(crate) struct PredCountRule;

impl FixingRule for PredCountRule {
    const NAME: &'static str = "sp1";

    fn process_edge(&mut self, s: &mut Sp1State, _g: &Graph, z: usize, k: usize, w: u64) -> Result<(), SolveError> {
        s.process_edge1_weighted(z, k, w)
    }
}

/// Outer heap loop, R phase and Q flush.
pub(crate) fn run_pred_counting<R: FixingRule>(
    g: &Graph,
    source: usize,
    opts: &RunOptions,
    rule: &mut R,
) -> Result<RunResult, SolveError> {
    check_source(g, source)?;
    let start = Instant::now();
    let mut s = Sp1State::new(g, source);
    if opts.debug_invariants {
        s.checker = Some(Checker::new(R::NAME, g, source));
    }
    let mut metrics = Metrics::default();
    s.heap.insert_or_adjust(source, Cost::ZERO)?;

    while !s.heap.is_effectively_empty() {
        s.check_outer(g)?;
        let fixed = &s.fixed;
        let (j, _) = s.heap.remove_min(|v| fixed[v])?;
        if s.fixed[j] {
            continue;
        }
        s.iteration += 1;
        s.fixed_this_iteration = 0;
        s.phase_floor = s.heap.peek_key();
        s.fix(j, "heap minimum")?;

        loop {
            s.check_inner(g)?;
            let Some(z) = s.ready.pop() else { break };
            s.explored[z] = true;
            s.exploring = s.dist[z];
            for &(k, w) in g.out_edges(z) {
                if !s.fixed[k] {
                    rule.process_edge(&mut s, g, z, k, w)?;
                }
            }
            s.exploring = Cost::INFINITY;
        }

        metrics.frontier_sizes.push(s.fixed_this_iteration);
        for z in s.deferred.take() {
            if !s.fixed[z] {
                s.heap.insert_or_adjust(z, s.dist[z])?;
            }
        }
    }
    s.check_outer(g)?;

    metrics.outer_iterations = s.iteration as u64;
    metrics.relaxations = s.relaxations;
    metrics.add_heap(s.heap.stats());
    metrics.wall_time = start.elapsed();
    Ok(RunResult {
        dist: s.dist,
        metrics,
        fixed_at_iteration: s.fixed_at,
    })
}

pub fn run_sp1(g: &Graph, source: usize, opts: &RunOptions) -> Result<RunResult, SolveError> {
    run_pred_counting(g, source, opts, &mut PredCountRule)
}

pub struct Sp1Solver;

impl ShortestPathSolver for Sp1Solver {
    fn name(&self) -> &'static str {
        "sp1"
    }

    fn description(&self) -> &'static str {
        "Dijkstra plus predecessor counting with an R worklist"
    }

    fn needs_pruning(&self) -> bool {
        true
    }

    fn solve(&self, graph: &Graph, source: usize, opts: &RunOptions) -> Result<RunResult, SolveError> {
        run_sp1(graph, source, opts)
    }
}
