use std::collections::VecDeque;

use super::Graph;
use crate::cost::Cost;
use crate::metrics::RunResult;

/// Result of deleting every non-source vertex that can never gain an
/// incoming arc.
///
/// Surviving vertices are renumbered densely (in increasing original order)
/// so that the compacted graph satisfies "only the source has in-degree 0".
#[derive(Debug, Clone)]
pub struct Pruned {
    pub graph: Graph,
    /// Original ids of the deleted vertices, in deletion order.
    pub removed: Vec<usize>,
    to_original: Vec<usize>,
    to_compact: Vec<Option<usize>>,
}

impl Pruned {
    pub fn original_vertex(&self, compact: usize) -> usize {
        self.to_original[compact]
    }

    pub fn compact_vertex(&self, original: usize) -> Option<usize> {
        self.to_compact[original]
    }

    pub fn original_n(&self) -> usize {
        self.to_compact.len()
    }

    /// Maps a result on the compacted graph back to original vertex ids.
    /// Deleted vertices get distance `INFINITY` and no fixing iteration.
    pub fn lift(&self, result: RunResult) -> RunResult {
        let n = self.original_n();
        let mut dist = vec![Cost::INFINITY; n];
        let mut fixed_at = vec![None; n];
        for (c, &o) in self.to_original.iter().enumerate() {
            dist[o] = result.dist[c];
            fixed_at[o] = result.fixed_at_iteration[c];
        }
        RunResult {
            dist,
            fixed_at_iteration: fixed_at,
            metrics: result.metrics,
        }
    }
}

/// Repeatedly deletes non-source vertices with in-degree zero together with
/// their outgoing arcs. Every arc is examined at most once.
pub fn prune_unreachable_roots(g: &Graph, source: usize) -> Pruned {
    let n = g.n();
    let mut indeg: Vec<usize> = (0..n).map(|v| g.in_degree(v)).collect();
    let mut alive = vec![true; n];
    let mut pending: VecDeque<usize> = (0..n).filter(|&v| v != source && indeg[v] == 0).collect();
    let mut removed = Vec::new();

    while let Some(v) = pending.pop_front() {
        alive[v] = false;
        removed.push(v);
        for &(t, _) in g.out_edges(v) {
            indeg[t] -= 1;
            if indeg[t] == 0 && t != source && alive[t] {
                pending.push_back(t);
            }
        }
    }

    let mut to_compact = vec![None; n];
    let mut to_original = Vec::with_capacity(n - removed.len());
    for v in (0..n).filter(|&v| alive[v]) {
        to_compact[v] = Some(to_original.len());
        to_original.push(v);
    }

    let edges: Vec<(usize, usize, u64)> = g
        .edges()
        .filter_map(|(u, v, w)| Some((to_compact[u]?, to_compact[v]?, w)))
        .collect();
    let compact_source = to_compact[source].expect("source is never pruned");
    let graph = Graph::from_checked(to_original.len(), compact_source, &edges);

    Pruned {
        graph,
        removed,
        to_original,
        to_compact,
    }
}
