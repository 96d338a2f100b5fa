//! Label setting with lower bounds.
//!
//! Every vertex carries a lower bound `C` next to its upper bound `D` and is
//! fixed as soon as the two meet. Each outer iteration drains from H every
//! vertex whose `D` is at most the out-version threshold (the smallest
//! `D + outWeight` over open vertices), then explores the fixed vertices in
//! order of `D + outWeight`.
//! Exploring an arc raises the bounds of the target's predecessors to the
//! current crossing bound and recomputes the target's bound from its
//! in-arcs.
//!
//! The in-version rule runs at the loop head and between explorations: an
//! open `j` is fixed when `D[j]` is at most the smallest `D` over unexplored
//! vertices plus the lightest arc into `j` from a vertex that was still open
//! when `j` was last queued. A third heap I, keyed by the difference, finds
//! such vertices.
//!
//! Bounds live in atomics so the same state serves the sequential reference
//! mode and the batched parallel mode.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering::Relaxed};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::cost::Cost;
use crate::frontier::{Deferred, KeyedWorklist};
use crate::graph::Graph;
use crate::heap::IndexedHeap;
use crate::invariants::Checker;
use crate::metrics::{Metrics, RunResult};
use crate::solver::{check_source, RunOptions, ShortestPathSolver, SolveError};
use crate::sp1::arc_weight;

const NAME: &str = "sp3";

/// Lightest outgoing arc of every vertex, `INFINITY` for sinks.
pub fn compute_out_weights(g: &Graph) -> Vec<Cost> {
    (0..g.n())
        .map(|u| {
            g.out_edges(u)
                .iter()
                .map(|&(_, w)| Cost::new(w))
                .min()
                .unwrap_or(Cost::INFINITY)
        })
        .collect()
}

/// Diagnostics about the crossing bound, filled in debug mode.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Sp3Stats {
    /// Crossing-bound computations.
    pub bound_evaluations: u64,
    /// Times the bare H minimum was larger than the bound actually used.
    pub bare_min_above_bound: u64,
    /// Times the bare H minimum was larger than the cost of some open
    /// vertex, so using it alone would have been unsound.
    pub bare_min_unsound: u64,
}

/// Mutable state of one SP3 run.
pub struct Sp3State {
    upper: Vec<AtomicU64>,
    lower: Vec<AtomicU64>,
    fixed: Vec<AtomicBool>,
    out_weight: Vec<Cost>,
    h: IndexedHeap,
    g: IndexedHeap,
    /// Keyed by `D` minus the lightest arc from a predecessor that was open
    /// when the key was written; serves the in-version rule.
    i: IndexedHeap,
    ready: KeyedWorklist,
    deferred: Deferred,
    /// `(D, v)` for every lowering recorded in Q; stale and fixed entries
    /// are discarded when they reach the top.
    deferred_min: BinaryHeap<Reverse<(Cost, usize)>>,
    /// `(D, v)` for fixed vertices; explored ones are discarded at the top.
    unexplored: BinaryHeap<Reverse<(Cost, usize)>>,
    explored: Vec<bool>,
    fixed_at: Vec<Option<u32>>,
    iteration: u32,
    fixed_this_iteration: u64,
    relaxations: AtomicU64,
    /// `D + outWeight` of the vertex whose arcs are being relaxed.
    exploring: Cost,
    checker: Option<Checker>,
    stats: Sp3Stats,
}

impl Sp3State {
    pub fn new(g: &Graph, source: usize) -> Sp3State {
        let n = g.n();
        let s = Sp3State {
            upper: (0..n).map(|_| AtomicU64::new(Cost::INFINITY.to_bits())).collect(),
            lower: (0..n).map(|_| AtomicU64::new(0)).collect(),
            fixed: (0..n).map(|_| AtomicBool::new(false)).collect(),
            out_weight: compute_out_weights(g),
            h: IndexedHeap::new(n),
            g: IndexedHeap::new(n),
            i: IndexedHeap::new(n),
            ready: KeyedWorklist::new(),
            deferred: Deferred::new(n),
            deferred_min: BinaryHeap::new(),
            unexplored: BinaryHeap::new(),
            explored: vec![false; n],
            fixed_at: vec![None; n],
            iteration: 0,
            fixed_this_iteration: 0,
            relaxations: AtomicU64::new(0),
            exploring: Cost::INFINITY,
            checker: None,
            stats: Sp3Stats::default(),
        };
        s.upper[source].store(0, Relaxed);
        s
    }

    #[inline]
    pub fn dist(&self, v: usize) -> Cost {
        Cost::from_bits(self.upper[v].load(Relaxed))
    }

    #[inline]
    pub fn lower(&self, v: usize) -> Cost {
        Cost::from_bits(self.lower[v].load(Relaxed))
    }

    #[inline]
    pub fn is_fixed(&self, v: usize) -> bool {
        self.fixed[v].load(Relaxed)
    }

    pub fn out_weight(&self) -> &[Cost] {
        &self.out_weight
    }

    fn out_key(&self, v: usize) -> Cost {
        self.dist(v).plus(self.out_weight[v])
    }

    /// Fixed predecessors are ignored: at the loop head they are explored,
    /// so their arcs already bound `D[v]` from above.
    fn in_key(&self, gr: &Graph, v: usize) -> Cost {
        let open_in = gr
            .in_edges(v)
            .iter()
            .filter(|&&(x, _)| !self.is_fixed(x))
            .map(|e| e.1)
            .min();
        match (self.dist(v).value(), open_in) {
            (Some(d), Some(w)) => Cost::new(d.saturating_sub(w)),
            (Some(_), None) => Cost::ZERO,
            _ => Cost::INFINITY,
        }
    }

    fn enqueue(&mut self, gr: &Graph, v: usize) -> Result<(), SolveError> {
        self.h.insert_or_adjust(v, self.dist(v))?;
        self.g.insert_or_adjust(v, self.out_key(v))?;
        let key = self.in_key(gr, v);
        // An existing key may already be lower; keys never rise.
        if self.i.key(v).is_none_or(|k| key < k) {
            self.i.insert_or_adjust(v, key)?;
        }
        Ok(())
    }

    /// Lowers `D[k]` to `cand` if smaller; returns whether it dropped.
    #[inline]
    fn lower_upper(&self, k: usize, cand: Cost) -> bool {
        self.upper[k].fetch_min(cand.to_bits(), Relaxed) > cand.to_bits()
    }

    #[inline]
    fn raise_lower(&self, v: usize, bound: Cost) {
        self.lower[v].fetch_max(bound.to_bits(), Relaxed);
    }

    /// Steps 2 to 4 for an arc into open `k` that was just relaxed.
    /// Returns true if this call fixed `k`.
    fn tighten(&self, gr: &Graph, k: usize, bound: Cost) -> Result<bool, SolveError> {
        // An infinite bound means nothing crosses yet; applying it would be unsound.
        if bound.is_finite() {
            for &(v, _) in gr.in_edges(k) {
                if !self.is_fixed(v) {
                    if let Some(chk) = &self.checker {
                        chk.lower_bound_holds(bound, std::iter::once(v), "crossing bound")?;
                    }
                    self.raise_lower(v, bound);
                }
            }
        }

        let via_preds = gr
            .in_edges(k)
            .iter()
            .map(|&(v, w)| self.lower(v).plus_weight(w))
            .min();
        if let Some(c) = via_preds {
            self.raise_lower(k, c);
        }
        let (c, d) = (self.lower(k), self.dist(k));
        if let Some(chk) = &self.checker {
            if c > chk.cost(k) {
                return Err(chk.fail(format!(
                    "in-arc bound raised C[{k}] to {c} above its cost {}",
                    chk.cost(k)
                )));
            }
        }
        if d.is_finite() && c == d && !self.fixed[k].swap(true, Relaxed) {
            if let Some(chk) = &self.checker {
                chk.on_fix(k, d, "bounds meet")?;
            }
            return Ok(true);
        }
        Ok(false)
    }

    /// Bookkeeping after `v` became fixed.
    fn settle(&mut self, v: usize) {
        self.fixed_at[v] = Some(self.iteration);
        self.fixed_this_iteration += 1;
        self.h.mark_fixed(v);
        self.g.mark_fixed(v);
        self.i.mark_fixed(v);
        let key = self.out_key(v);
        self.ready.push(v, key);
        self.unexplored.push(Reverse((self.dist(v), v)));
    }

    fn note_lowered(&mut self, k: usize) {
        if !self.is_fixed(k) {
            self.deferred.insert(k);
            self.deferred_min.push(Reverse((self.dist(k), k)));
        }
    }

    /// Smallest current `D` over open members of Q.
    fn deferred_floor(&mut self) -> Cost {
        while let Some(&Reverse((d, v))) = self.deferred_min.peek() {
            if !self.is_fixed(v) && self.dist(v) == d {
                return d;
            }
            self.deferred_min.pop();
        }
        Cost::INFINITY
    }

    /// Smallest `D` over open vertices in H or Q and fixed vertices not yet
    /// explored. Every vertex that is not explored costs at least this much.
    fn unexplored_floor(&mut self) -> Cost {
        let fixed = &self.fixed;
        let hmin = self.h.get_min_nonfixed(|v| fixed[v].load(Relaxed));
        while let Some(&Reverse((_, v))) = self.unexplored.peek() {
            if !self.explored[v] {
                break;
            }
            self.unexplored.pop();
        }
        let rmin = self.unexplored.peek().map_or(Cost::INFINITY, |e| e.0 .0);
        hmin.min(self.deferred_floor()).min(rmin)
    }

    /// In-version: fixes open `j` with `D[j]` at most the unexplored floor
    /// plus the lightest arc into `j` from a vertex that was not explored
    /// when its I key was written. Arcs from explored vertices are already
    /// relaxed, so they cannot undercut `D[j]`.
    fn drain_in_version(&mut self) -> Result<(), SolveError> {
        let floor = self.unexplored_floor();
        loop {
            let fixed = &self.fixed;
            if self.i.is_effectively_empty() || self.i.get_min_nonfixed(|v| fixed[v].load(Relaxed)) > floor {
                return Ok(());
            }
            let (j, _) = self.i.remove_min(|v| fixed[v].load(Relaxed))?;
            self.fix_from_heap(j, "in-version")?;
        }
    }

    /// A lower bound on the cost of every open vertex.
    ///
    /// A shortest path to an open vertex leaves the fixed set through some
    /// arc. If that arc was relaxed, its head is open with a current `D`
    /// equal to its cost, held in H or covered by Q's floor. Otherwise the
    /// tail is waiting in R or is being explored, and the path costs at least
    /// its `D + outWeight`.
    fn crossing_bound(&mut self) -> Cost {
        let fixed = &self.fixed;
        let hmin = self.h.get_min_nonfixed(|v| fixed[v].load(Relaxed));
        let bound = hmin
            .min(self.deferred_floor())
            .min(self.ready.min_key())
            .min(self.exploring);
        if let Some(chk) = &self.checker {
            self.stats.bound_evaluations += 1;
            // At or below the bound the bare minimum is sound anyway.
            if hmin > bound {
                self.stats.bare_min_above_bound += 1;
                let open_min = (0..self.fixed.len())
                    .filter(|&v| !self.is_fixed(v))
                    .map(|v| chk.cost(v))
                    .min()
                    .unwrap_or(Cost::INFINITY);
                if hmin.is_finite() && hmin > open_min {
                    self.stats.bare_min_unsound += 1;
                }
            }
        }
        bound
    }

    /// Handles arc `(z, k)` with fixed `z` and open `k`.
    pub fn process_edge3(&mut self, gr: &Graph, z: usize, k: usize) -> Result<(), SolveError> {
        let w = arc_weight(gr, z, k);
        self.process_edge3_weighted(gr, z, k, w)
    }

    fn process_edge3_weighted(&mut self, gr: &Graph, z: usize, k: usize, w: u64) -> Result<(), SolveError> {
        self.relaxations.fetch_add(1, Relaxed);
        if self.lower_upper(k, self.dist(z).plus_weight(w)) {
            // Q's floor must cover k before the bound is taken.
            self.note_lowered(k);
        }
        let bound = self.crossing_bound();
        if self.tighten(gr, k, bound)? {
            self.settle(k);
        }
        Ok(())
    }

    /// Fixes a vertex drained from H or I at the loop head.
    fn fix_from_heap(&mut self, j: usize, rule: &str) -> Result<(), SolveError> {
        let d = self.dist(j);
        if let Some(chk) = &self.checker {
            chk.on_fix(j, d, rule)?;
        }
        self.lower[j].store(d.to_bits(), Relaxed);
        self.fixed[j].store(true, Relaxed);
        self.settle(j);
        Ok(())
    }

    fn explore_sequential(&mut self, gr: &Graph) -> Result<(), SolveError> {
        loop {
            self.check_bounds_at("inner loop")?;
            self.drain_in_version()?;
            let Some(z) = self.ready.pop() else { break };
            self.exploring = self.out_key(z);
            for &(k, w) in gr.out_edges(z) {
                if !self.is_fixed(k) {
                    self.process_edge3_weighted(gr, z, k, w)?;
                }
            }
            self.exploring = Cost::INFINITY;
            self.explored[z] = true;
        }
        Ok(())
    }

    /// Explores R in rounds of whole batches. The bound taken at the start of
    /// a batch covers the entire batch: it bounds the cost of every vertex
    /// open at that instant, costs never change, and the open set only
    /// shrinks.
    fn explore_parallel(&mut self, gr: &Graph) -> Result<(), SolveError> {
        loop {
            self.check_bounds_at("inner loop")?;
            self.drain_in_version()?;
            if self.ready.is_empty() {
                break;
            }
            let bound = self.crossing_bound();
            let batch = self.ready.drain_all();
            let this = &*self;
            let parts = batch
                .par_iter()
                .map(|&z| {
                    let mut newly_fixed = Vec::new();
                    let mut lowered = Vec::new();
                    let dz = this.dist(z);
                    for &(k, w) in gr.out_edges(z) {
                        if this.is_fixed(k) {
                            continue;
                        }
                        this.relaxations.fetch_add(1, Relaxed);
                        if this.lower_upper(k, dz.plus_weight(w)) {
                            lowered.push(k);
                        }
                        if this.tighten(gr, k, bound)? {
                            newly_fixed.push(k);
                        }
                    }
                    Ok((newly_fixed, lowered))
                })
                .collect::<Result<Vec<_>, SolveError>>()?;
            for &z in &batch {
                self.explored[z] = true;
            }
            for (newly_fixed, lowered) in parts {
                for k in newly_fixed {
                    self.settle(k);
                }
                for k in lowered {
                    self.note_lowered(k);
                }
            }
        }
        Ok(())
    }

    fn check_bounds_at(&mut self, at: &str) -> Result<(), SolveError> {
        let Some(mut chk) = self.checker.take() else { return Ok(()) };
        let res = chk.bounds(|v| self.is_fixed(v), |v| self.lower(v), |v| self.dist(v), at);
        self.checker = Some(chk);
        res
    }

    fn check_outer(&mut self, gr: &Graph) -> Result<(), SolveError> {
        if self.checker.is_none() {
            return Ok(());
        }
        self.check_bounds_at("outer loop")?;
        let chk = self.checker.as_ref().expect("checked above");
        let is_fixed = |v: usize| self.is_fixed(v);
        self.h.check_invariants(is_fixed).map_err(|e| chk.fail(format!("H: {e}")))?;
        self.g.check_invariants(is_fixed).map_err(|e| chk.fail(format!("G: {e}")))?;
        self.i.check_invariants(is_fixed).map_err(|e| chk.fail(format!("I: {e}")))?;
        for v in 0..gr.n() {
            let open = self.dist(v).is_finite() && !self.is_fixed(v);
            let keyed = self.h.key(v) == Some(self.dist(v))
                && self.g.key(v) == Some(self.out_key(v))
                && self.i.key(v).is_some_and(|k| k <= self.dist(v));
            if open && !keyed {
                return Err(chk.fail(format!("outer loop: open vertex {v} missing from H, G or I at its current key")));
            }
        }
        Ok(())
    }
}

/// Records checked at the end of an iteration in debug mode.
struct IterationPromises {
    /// Open vertices with `D` at most the threshold.
    by_threshold: Vec<usize>,
    /// Open vertices with `D <= m + min in-arc weight`, `m` the smallest open `D`.
    by_in_weight: Vec<usize>,
}

fn promises(s: &Sp3State, gr: &Graph, threshold: Cost) -> IterationPromises {
    let open: Vec<usize> = (0..gr.n())
        .filter(|&v| !s.is_fixed(v) && s.dist(v).is_finite())
        .collect();
    let m = open.iter().map(|&v| s.dist(v)).min().unwrap_or(Cost::INFINITY);
    let by_threshold = open.iter().copied().filter(|&v| s.dist(v) <= threshold).collect();
    let by_in_weight = open
        .iter()
        .copied()
        .filter(|&v| {
            let min_in = gr.in_edges(v).iter().map(|&(_, w)| Cost::new(w)).min();
            min_in.is_some_and(|w| s.dist(v) <= m.plus(w))
        })
        .collect();
    IterationPromises {
        by_threshold,
        by_in_weight,
    }
}

fn check_promises(s: &Sp3State, p: &IterationPromises) -> Result<(), SolveError> {
    let Some(chk) = &s.checker else { return Ok(()) };
    for &v in &p.by_threshold {
        if !s.is_fixed(v) {
            return Err(chk.fail(format!(
                "iteration {}: vertex {v} was within the threshold but stayed open",
                s.iteration
            )));
        }
    }
    for &v in &p.by_in_weight {
        if !s.is_fixed(v) {
            return Err(chk.fail(format!(
                "iteration {}: vertex {v} met the in-weight bound but stayed open",
                s.iteration
            )));
        }
    }
    Ok(())
}

/// Runs SP3 and also returns the crossing-bound diagnostics.
pub fn run_sp3_detailed(g: &Graph, source: usize, opts: &RunOptions) -> Result<(RunResult, Sp3Stats), SolveError> {
    check_source(g, source)?;
    let start = Instant::now();
    let mut s = Sp3State::new(g, source);
    if opts.debug_invariants {
        s.checker = Some(Checker::new(NAME, g, source));
    }
    let mut metrics = Metrics::default();
    s.enqueue(g, source)?;

    while !s.h.is_effectively_empty() {
        s.check_outer(g)?;
        s.iteration += 1;
        s.fixed_this_iteration = 0;

        let fixed = &s.fixed;
        let threshold = s.g.get_min_nonfixed(|v| fixed[v].load(Relaxed));
        let promised = s.checker.is_some().then(|| promises(&s, g, threshold));

        s.drain_in_version()?;
        // Out-version: D[j] <= threshold.
        loop {
            let fixed = &s.fixed;
            if s.h.is_effectively_empty() || s.h.get_min_nonfixed(|v| fixed[v].load(Relaxed)) > threshold {
                break;
            }
            let (j, _) = s.h.remove_min(|v| fixed[v].load(Relaxed))?;
            s.fix_from_heap(j, "threshold")?;
        }

        if opts.parallel {
            s.explore_parallel(g)?;
        } else {
            s.explore_sequential(g)?;
        }

        if let Some(p) = &promised {
            check_promises(&s, p)?;
        }
        metrics.frontier_sizes.push(s.fixed_this_iteration);
        s.deferred_min.clear();
        for z in s.deferred.take() {
            if !s.is_fixed(z) {
                s.enqueue(g, z)?;
            }
        }
    }
    s.check_outer(g)?;

    metrics.outer_iterations = s.iteration as u64;
    metrics.relaxations = s.relaxations.load(Relaxed);
    metrics.add_heap(s.h.stats());
    metrics.add_heap(s.g.stats());
    metrics.add_heap(s.i.stats());
    metrics.wall_time = start.elapsed();
    let dist = (0..g.n()).map(|v| s.dist(v)).collect();
    Ok((
        RunResult {
            dist,
            metrics,
            fixed_at_iteration: s.fixed_at,
        },
        s.stats,
    ))
}

pub fn run_sp3(g: &Graph, source: usize, opts: &RunOptions) -> Result<RunResult, SolveError> {
    run_sp3_detailed(g, source, opts).map(|(r, _)| r)
}

pub struct Sp3Solver;

impl ShortestPathSolver for Sp3Solver {
    fn name(&self) -> &'static str {
        NAME
    }

    fn description(&self) -> &'static str {
        "lower and upper bounds, fixing when they meet"
    }

    fn needs_pruning(&self) -> bool {
        true
    }

    fn supports_parallel(&self) -> bool {
        true
    }

    fn solve(&self, graph: &Graph, source: usize, opts: &RunOptions) -> Result<RunResult, SolveError> {
        run_sp3(graph, source, opts)
    }
}
