//! The common solver interface and the name-keyed registry.

use thiserror::Error;

use crate::dijkstra::DijkstraSolver;
use crate::graph::{prune_unreachable_roots, Graph};
use crate::heap::HeapError;
use crate::metrics::RunResult;
use crate::oracle::BellmanFordSolver;
use crate::sp1::Sp1Solver;
use crate::sp2::Sp2Solver;
use crate::sp3::Sp3Solver;
use crate::sp4::Sp4Solver;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Check the algorithm's invariants against oracle distances while
    /// running. O(n) extra work per loop head.
    pub debug_invariants: bool,
    /// Explore frontiers with rayon where the solver supports it.
    pub parallel: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("source {vertex} out of range for {n} vertices")]
    SourceOutOfRange { vertex: usize, n: usize },
    #[error("heap misuse: {0}")]
    Heap(#[from] HeapError),
    #[error("{algorithm}: invariant violated: {detail}")]
    InvariantViolation { algorithm: &'static str, detail: String },
}

impl SolveError {
    pub(crate) fn invariant(algorithm: &'static str, detail: impl Into<String>) -> SolveError {
        SolveError::InvariantViolation {
            algorithm,
            detail: detail.into(),
        }
    }
}

pub(crate) fn check_source(g: &Graph, source: usize) -> Result<(), SolveError> {
    if source >= g.n() {
        return Err(SolveError::SourceOutOfRange { vertex: source, n: g.n() });
    }
    Ok(())
}

/// A single-source shortest-path algorithm.
pub trait ShortestPathSolver: Send + Sync {
    /// Registry key, e.g. `"sp2"`.
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    /// Whether the solver expects a graph in which only the source has
    /// in-degree zero.
    fn needs_pruning(&self) -> bool {
        false
    }

    fn supports_parallel(&self) -> bool {
        false
    }

    fn solve(&self, graph: &Graph, source: usize, opts: &RunOptions) -> Result<RunResult, SolveError>;
}

/// A solver run on the caller's vertex numbering.
#[derive(Debug, Clone)]
pub struct PreparedRun {
    pub result: RunResult,
    /// Vertices deleted by pruning (original ids); empty if not pruned.
    pub pruned: Vec<usize>,
}

/// Runs `solver`, pruning first if it asks for it, and reports the result in
/// the original vertex ids.
pub fn run_on_original(
    solver: &dyn ShortestPathSolver,
    graph: &Graph,
    source: usize,
    opts: &RunOptions,
) -> Result<PreparedRun, SolveError> {
    check_source(graph, source)?;
    if !solver.needs_pruning() {
        return Ok(PreparedRun {
            result: solver.solve(graph, source, opts)?,
            pruned: Vec::new(),
        });
    }
    let pruned = prune_unreachable_roots(graph, source);
    let result = solver.solve(&pruned.graph, pruned.graph.source(), opts)?;
    Ok(PreparedRun {
        result: pruned.lift(result),
        pruned: pruned.removed.clone(),
    })
}

/// Solvers addressable by name, in registration order.
pub struct SolverRegistry {
    solvers: Vec<Box<dyn ShortestPathSolver>>,
}

impl SolverRegistry {
    pub fn empty() -> SolverRegistry {
        SolverRegistry { solvers: Vec::new() }
    }

    /// Baseline Dijkstra, SP1 through SP4, and the Bellman-Ford oracle.
    pub fn with_defaults() -> SolverRegistry {
        let mut r = SolverRegistry::empty();
        r.register(Box::new(DijkstraSolver));
        r.register(Box::new(Sp1Solver));
        r.register(Box::new(Sp2Solver));
        r.register(Box::new(Sp3Solver));
        r.register(Box::new(Sp4Solver));
        r.register(Box::new(BellmanFordSolver));
        r
    }

    /// Adds a solver, replacing any previous one with the same name.
    pub fn register(&mut self, solver: Box<dyn ShortestPathSolver>) {
        if let Some(slot) = self.solvers.iter_mut().find(|s| s.name() == solver.name()) {
            *slot = solver;
        } else {
            self.solvers.push(solver);
        }
    }

    pub fn get(&self, name: &str) -> Option<&dyn ShortestPathSolver> {
        self.solvers.iter().find(|s| s.name() == name).map(|s| s.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.solvers.iter().map(|s| s.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn ShortestPathSolver> {
        self.solvers.iter().map(|s| s.as_ref())
    }
}

impl Default for SolverRegistry {
    fn default() -> Self {
        SolverRegistry::with_defaults()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::example_graph;

    #[test]
    fn defaults_are_registered_in_order() {
        let r = SolverRegistry::with_defaults();
        assert_eq!(r.names(), vec!["dijkstra", "sp1", "sp2", "sp3", "sp4", "oracle"]);
        assert!(r.get("sp3").unwrap().needs_pruning());
        assert!(!r.get("dijkstra").unwrap().needs_pruning());
        assert!(r.get("nope").is_none());
    }

    #[test]
    fn register_replaces_by_name() {
        let mut r = SolverRegistry::with_defaults();
        r.register(Box::new(DijkstraSolver));
        assert_eq!(r.names().len(), 6);
    }

    #[test]
    fn source_is_validated() {
        let r = SolverRegistry::with_defaults();
        let g = example_graph();
        for s in r.iter() {
            assert_eq!(
                run_on_original(s, &g, 9, &RunOptions::default()).unwrap_err(),
                SolveError::SourceOutOfRange { vertex: 9, n: 5 }
            );
        }
    }
}
