//! Immutable directed graphs with both out- and in-adjacency.

mod dimacs;
mod generate;
mod prune;

use thiserror::Error;

use crate::cost::MAX_WEIGHT;

pub use dimacs::{parse_dimacs, serialize_dimacs, DimacsError};
pub use generate::{generate, GenError, GenSpec};
pub use prune::{prune_unreachable_roots, Pruned};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({u}, {v}) has non-positive weight {w}")]
    NonPositiveWeight { u: usize, v: usize, w: i64 },
    #[error("edge ({u}, {v}) weight {w} exceeds the maximum {MAX_WEIGHT}")]
    WeightTooLarge { u: usize, v: usize, w: u64 },
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
}

/// A weighted directed graph stored as two CSR arrays.
///
/// `out_edges(u)` keeps the input order of `u`'s arcs and `in_edges(v)` keeps
/// the input order of `v`'s incoming arcs, so traversal order (and therefore
/// every solver's tie-breaking) is a function of the edge list alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    source: usize,
    out_offsets: Vec<usize>,
    out_adj: Vec<(usize, u64)>,
    in_offsets: Vec<usize>,
    in_adj: Vec<(usize, u64)>,
}

impl Graph {
    /// Validates `edges` and builds both adjacency directions. Weights are
    /// taken as signed so that zero and negative input can be reported.
    pub fn build(n: usize, edges: &[(usize, usize, i64)]) -> Result<Graph, GraphError> {
        let mut checked = Vec::with_capacity(edges.len());
        for &(u, v, w) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if w <= 0 {
                return Err(GraphError::NonPositiveWeight { u, v, w });
            }
            let w = w as u64;
            if w > MAX_WEIGHT {
                return Err(GraphError::WeightTooLarge { u, v, w });
            }
            checked.push((u, v, w));
        }

        let mut pairs: Vec<(usize, usize)> = checked.iter().map(|&(u, v, _)| (u, v)).collect();
        pairs.sort_unstable();
        if let Some(dup) = pairs.windows(2).find(|p| p[0] == p[1]) {
            return Err(GraphError::DuplicateEdge(dup[0].0, dup[0].1));
        }

        Ok(Graph::from_checked(n, 0, &checked))
    }

    pub(crate) fn from_checked(n: usize, source: usize, edges: &[(usize, usize, u64)]) -> Graph {
        let (out_offsets, out_adj) = csr(n, edges.iter().map(|&(u, v, w)| (u, v, w)));
        let (in_offsets, in_adj) = csr(n, edges.iter().map(|&(u, v, w)| (v, u, w)));
        Graph {
            n,
            source,
            out_offsets,
            out_adj,
            in_offsets,
            in_adj,
        }
    }

    /// Same graph with a different designated source.
    pub fn with_source(mut self, source: usize) -> Result<Graph, GraphError> {
        if source >= self.n {
            return Err(GraphError::VertexOutOfRange { vertex: source, n: self.n });
        }
        self.source = source;
        Ok(self)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.out_adj.len()
    }

    #[inline]
    pub fn source(&self) -> usize {
        self.source
    }

    #[inline]
    pub fn out_edges(&self, u: usize) -> &[(usize, u64)] {
        &self.out_adj[self.out_offsets[u]..self.out_offsets[u + 1]]
    }

    #[inline]
    pub fn in_edges(&self, v: usize) -> &[(usize, u64)] {
        &self.in_adj[self.in_offsets[v]..self.in_offsets[v + 1]]
    }

    #[inline]
    pub fn out_degree(&self, u: usize) -> usize {
        self.out_offsets[u + 1] - self.out_offsets[u]
    }

    #[inline]
    pub fn in_degree(&self, v: usize) -> usize {
        self.in_offsets[v + 1] - self.in_offsets[v]
    }

    /// Largest in-degree over all vertices.
    pub fn max_in_degree(&self) -> usize {
        (0..self.n).map(|v| self.in_degree(v)).max().unwrap_or(0)
    }

    /// All arcs `(u, v, w)` in out-adjacency order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        (0..self.n).flat_map(move |u| self.out_edges(u).iter().map(move |&(v, w)| (u, v, w)))
    }

    /// Whether the arc `(u, v)` exists.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out_edges(u).iter().any(|&(t, _)| t == v)
    }
}

fn csr(
    n: usize,
    arcs: impl Iterator<Item = (usize, usize, u64)> + Clone,
) -> (Vec<usize>, Vec<(usize, u64)>) {
    let mut offsets = vec![0usize; n + 1];
    for (from, _, _) in arcs.clone() {
        offsets[from + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let mut cursor = offsets.clone();
    let mut adj = vec![(0usize, 0u64); offsets[n]];
    for (from, to, w) in arcs {
        adj[cursor[from]] = (to, w);
        cursor[from] += 1;
    }
    (offsets, adj)
}

/// Convenience wrapper for [`Graph::build`].
pub fn build_graph(n: usize, edges: &[(usize, usize, i64)]) -> Result<Graph, GraphError> {
    Graph::build(n, edges)
}

/// The five-vertex running example used throughout the tests.
pub fn example_graph() -> Graph {
    Graph::build(
        5,
        &[
            (0, 1, 9),
            (0, 2, 2),
            (1, 3, 3),
            (1, 4, 2),
            (2, 3, 6),
            (2, 4, 5),
            (4, 3, 8),
            (3, 2, 1),
        ],
    )
    .expect("example graph is valid")
}
