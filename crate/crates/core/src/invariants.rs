//! Oracle-backed runtime checks used when `debug_invariants` is set.

use crate::cost::Cost;
use crate::graph::Graph;
use crate::oracle::bellman_ford_oracle;
use crate::solver::SolveError;

pub(crate) struct Checker {
    algorithm: &'static str,
    cost: Vec<Cost>,
    prev_lower: Vec<Cost>,
    prev_upper: Vec<Cost>,
}

impl Checker {
    pub(crate) fn new(algorithm: &'static str, g: &Graph, source: usize) -> Checker {
        let cost = bellman_ford_oracle(g, source).dist;
        let n = g.n();
        Checker {
            algorithm,
            cost,
            prev_lower: vec![Cost::ZERO; n],
            prev_upper: vec![Cost::INFINITY; n],
        }
    }

    pub(crate) fn fail(&self, detail: String) -> SolveError {
        SolveError::invariant(self.algorithm, detail)
    }

    pub(crate) fn cost(&self, v: usize) -> Cost {
        self.cost[v]
    }

    /// A vertex is being fixed with upper bound `d`.
    pub(crate) fn on_fix(&self, v: usize, d: Cost, rule: &str) -> Result<(), SolveError> {
        if d != self.cost[v] {
            return Err(self.fail(format!(
                "{rule} fixed vertex {v} at {d} but its cost is {}",
                self.cost[v]
            )));
        }
        Ok(())
    }

    /// `fixed[x] => D[x] = cost[x]` for every vertex.
    pub(crate) fn fixed_are_exact(
        &self,
        fixed: impl Fn(usize) -> bool,
        upper: impl Fn(usize) -> Cost,
        at: &str,
    ) -> Result<(), SolveError> {
        for v in 0..self.cost.len() {
            if fixed(v) && upper(v) != self.cost[v] {
                return Err(self.fail(format!(
                    "{at}: fixed vertex {v} has D = {} but cost {}",
                    upper(v),
                    self.cost[v]
                )));
            }
        }
        Ok(())
    }

    /// `C[x] <= cost[x] <= D[x]`, `C` nondecreasing and `D` nonincreasing
    /// since the last call, and `fixed[x] => C[x] = D[x] = cost[x]`.
    pub(crate) fn bounds(
        &mut self,
        fixed: impl Fn(usize) -> bool,
        lower: impl Fn(usize) -> Cost,
        upper: impl Fn(usize) -> Cost,
        at: &str,
    ) -> Result<(), SolveError> {
        for v in 0..self.cost.len() {
            let (c, d, k) = (lower(v), upper(v), self.cost[v]);
            if c > k || k > d {
                return Err(self.fail(format!("{at}: vertex {v} has C = {c}, cost = {k}, D = {d}")));
            }
            if c < self.prev_lower[v] {
                return Err(self.fail(format!(
                    "{at}: C[{v}] decreased from {} to {c}",
                    self.prev_lower[v]
                )));
            }
            if d > self.prev_upper[v] {
                return Err(self.fail(format!(
                    "{at}: D[{v}] increased from {} to {d}",
                    self.prev_upper[v]
                )));
            }
            if fixed(v) && (c != d || d != k) {
                return Err(self.fail(format!(
                    "{at}: fixed vertex {v} has C = {c}, D = {d}, cost = {k}"
                )));
            }
            self.prev_lower[v] = c;
            self.prev_upper[v] = d;
        }
        Ok(())
    }

    /// A value used as a lower bound on every vertex in `candidates` must not
    /// exceed any of their costs.
    pub(crate) fn lower_bound_holds(
        &self,
        bound: Cost,
        candidates: impl Iterator<Item = usize>,
        what: &str,
    ) -> Result<(), SolveError> {
        for v in candidates {
            if bound > self.cost[v] {
                return Err(self.fail(format!(
                    "{what} {bound} exceeds cost {} of non-fixed vertex {v}",
                    self.cost[v]
                )));
            }
        }
        Ok(())
    }
}
