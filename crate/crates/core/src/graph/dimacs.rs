use std::fmt::Write as _;

use thiserror::Error;

use super::{Graph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimacsError {
    #[error("line {0}: malformed line")]
    MalformedLine(usize),
    #[error("missing `p sp <n> <m>` problem line")]
    MissingProblemLine,
    #[error("problem line declares {expected} arcs but {found} were read")]
    ArcCountMismatch { expected: usize, found: usize },
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
}

/// Parses the DIMACS shortest-path (`.gr`) format.
///
/// Vertices are 1-indexed on disk and 0-indexed in the returned graph.
pub fn parse_dimacs(text: &str) -> Result<Graph, DimacsError> {
    let mut problem: Option<(usize, usize)> = None;
    let mut edges = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_ascii_whitespace();
        match fields.next() {
            Some("c") => {}
            Some("p") => {
                if problem.is_some() || fields.next() != Some("sp") {
                    return Err(DimacsError::MalformedLine(lineno));
                }
                let n = parse_field(fields.next(), lineno)?;
                let m = parse_field(fields.next(), lineno)?;
                if fields.next().is_some() {
                    return Err(DimacsError::MalformedLine(lineno));
                }
                problem = Some((n as usize, m as usize));
                edges.reserve(m as usize);
            }
            Some("a") => {
                let (n, _) = problem.ok_or(DimacsError::MissingProblemLine)?;
                let u = parse_field(fields.next(), lineno)?;
                let v = parse_field(fields.next(), lineno)?;
                let w = parse_field(fields.next(), lineno)?;
                if fields.next().is_some() || u == 0 || v == 0 {
                    return Err(DimacsError::MalformedLine(lineno));
                }
                let (u, v) = (u as usize - 1, v as usize - 1);
                if u >= n || v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: u.max(v), n }.into());
                }
                let w = i64::try_from(w).map_err(|_| DimacsError::MalformedLine(lineno))?;
                edges.push((u, v, w));
            }
            _ => return Err(DimacsError::MalformedLine(lineno)),
        }
    }

    let (n, m) = problem.ok_or(DimacsError::MissingProblemLine)?;
    if edges.len() != m {
        return Err(DimacsError::ArcCountMismatch {
            expected: m,
            found: edges.len(),
        });
    }
    Ok(Graph::build(n, &edges)?)
}

fn parse_field(field: Option<&str>, lineno: usize) -> Result<u64, DimacsError> {
    field
        .and_then(|s| s.parse::<u64>().ok())
        .ok_or(DimacsError::MalformedLine(lineno))
}

/// Writes `g` in DIMACS `.gr` form with an optional comment header.
pub fn serialize_dimacs(g: &Graph, comment: Option<&str>) -> String {
    let mut out = String::with_capacity(16 * (g.m() + 2));
    if let Some(c) = comment {
        for line in c.lines() {
            let _ = writeln!(out, "c {line}");
        }
    }
    let _ = writeln!(out, "p sp {} {}", g.n(), g.m());
    for (u, v, w) in g.edges() {
        let _ = writeln!(out, "a {} {} {}", u + 1, v + 1, w);
    }
    out
}
