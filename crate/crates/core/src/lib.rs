//! Instrumented single-source shortest-path solvers.
//!
//! Dijkstra's algorithm, four successors that fix vertices early (SP1 to
//! SP4), an independent Bellman-Ford oracle and the tooling to compare
//! them. Every solver implements [`ShortestPathSolver`] and is looked up by
//! name in a [`SolverRegistry`].
//!
//! ```
//! use sssp_lab::{example_graph, RunOptions, SolverRegistry};
//!
//! let registry = SolverRegistry::with_defaults();
//! let sp2 = registry.get("sp2").unwrap();
//! let run = sp2.solve(&example_graph(), 0, &RunOptions::default()).unwrap();
//! let dist: Vec<_> = run.dist.iter().map(|d| d.value().unwrap()).collect();
//! assert_eq!(dist, [0, 9, 2, 8, 7]);
//! ```

pub mod bench;
pub mod compare;
pub mod cost;
pub mod dijkstra;
mod frontier;
pub mod graph;
pub mod heap;
mod invariants;
pub mod metrics;
pub mod oracle;
pub mod solver;
pub mod sp1;
pub mod sp2;
pub mod sp3;
pub mod sp4;

pub use compare::{compare_runs, Check, CompareError, ComparisonReport};
pub use cost::Cost;
pub use graph::{
    build_graph, example_graph, generate, parse_dimacs, prune_unreachable_roots, serialize_dimacs, DimacsError,
    GenError, GenSpec, Graph, GraphError, Pruned,
};
pub use heap::{HeapError, IndexedHeap};
pub use metrics::{Metrics, RunResult};
pub use oracle::{bellman_ford_oracle, OracleResult};
pub use solver::{run_on_original, PreparedRun, RunOptions, ShortestPathSolver, SolveError, SolverRegistry};
