//! Seeded graph families for tests and benchmarks.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::Graph;
use crate::cost::MAX_WEIGHT;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("infeasible generator spec: {0}")]
    InfeasibleSpec(String),
    #[error("cannot parse generator spec `{0}`")]
    Parse(String),
}

/// A graph family plus its parameters.
///
/// The textual form is `family:key=value,...`, for example
/// `dag:n=100,m=400,wmax=10,seed=7` or `star_last:n=5`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenSpec {
    Random { n: usize, m: usize, wmax: u64, seed: u64 },
    Dag { n: usize, m: usize, wmax: u64, seed: u64 },
    Unweighted { n: usize, m: usize, seed: u64 },
    Grid { rows: usize, cols: usize, wmax: u64, seed: u64 },
    /// The vertex settled last has arcs to every other vertex.
    StarLast { n: usize },
}

impl GenSpec {
    pub fn family(&self) -> &'static str {
        match self {
            GenSpec::Random { .. } => "random",
            GenSpec::Dag { .. } => "dag",
            GenSpec::Unweighted { .. } => "unweighted",
            GenSpec::Grid { .. } => "grid",
            GenSpec::StarLast { .. } => "star_last",
        }
    }

    /// Replaces the seed; a no-op for the deterministic `star_last` family.
    pub fn with_seed(mut self, new_seed: u64) -> GenSpec {
        match &mut self {
            GenSpec::Random { seed, .. }
            | GenSpec::Dag { seed, .. }
            | GenSpec::Unweighted { seed, .. }
            | GenSpec::Grid { seed, .. } => *seed = new_seed,
            GenSpec::StarLast { .. } => {}
        }
        self
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            GenSpec::Random { seed, .. }
            | GenSpec::Dag { seed, .. }
            | GenSpec::Unweighted { seed, .. }
            | GenSpec::Grid { seed, .. } => Some(*seed),
            GenSpec::StarLast { .. } => None,
        }
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenSpec::Random { n, m, wmax, seed } => {
                write!(f, "random:n={n},m={m},wmax={wmax},seed={seed}")
            }
            GenSpec::Dag { n, m, wmax, seed } => write!(f, "dag:n={n},m={m},wmax={wmax},seed={seed}"),
            GenSpec::Unweighted { n, m, seed } => write!(f, "unweighted:n={n},m={m},seed={seed}"),
            GenSpec::Grid { rows, cols, wmax, seed } => {
                write!(f, "grid:rows={rows},cols={cols},wmax={wmax},seed={seed}")
            }
            GenSpec::StarLast { n } => write!(f, "star_last:n={n}"),
        }
    }
}

impl FromStr for GenSpec {
    type Err = GenError;

    fn from_str(s: &str) -> Result<GenSpec, GenError> {
        let bad = || GenError::Parse(s.to_string());
        let (family, params) = s.split_once(':').unwrap_or((s, ""));
        let mut kv = Vec::new();
        for item in params.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(bad)?;
            let v: u64 = v.trim().parse().map_err(|_| bad())?;
            kv.push((k.trim().to_string(), v));
        }
        let get = |key: &str, default: Option<u64>| -> Result<u64, GenError> {
            kv.iter()
                .find(|(k, _)| k == key)
                .map(|&(_, v)| v)
                .or(default)
                .ok_or_else(bad)
        };
        let allowed: &[&str] = match family.trim() {
            "random" | "dag" => &["n", "m", "wmax", "seed"],
            "unweighted" => &["n", "m", "seed"],
            "grid" => &["rows", "cols", "wmax", "seed"],
            "star_last" => &["n"],
            _ => return Err(bad()),
        };
        if kv.iter().any(|(k, _)| !allowed.contains(&k.as_str())) {
            return Err(bad());
        }
        let spec = match family.trim() {
            "random" => GenSpec::Random {
                n: get("n", None)? as usize,
                m: get("m", None)? as usize,
                wmax: get("wmax", Some(100))?,
                seed: get("seed", Some(0))?,
            },
            "dag" => GenSpec::Dag {
                n: get("n", None)? as usize,
                m: get("m", None)? as usize,
                wmax: get("wmax", Some(100))?,
                seed: get("seed", Some(0))?,
            },
            "unweighted" => GenSpec::Unweighted {
                n: get("n", None)? as usize,
                m: get("m", None)? as usize,
                seed: get("seed", Some(0))?,
            },
            "grid" => GenSpec::Grid {
                rows: get("rows", None)? as usize,
                cols: get("cols", None)? as usize,
                wmax: get("wmax", Some(100))?,
                seed: get("seed", Some(0))?,
            },
            _ => GenSpec::StarLast {
                n: get("n", None)? as usize,
            },
        };
        Ok(spec)
    }
}

/// Builds the graph described by `spec`. Deterministic for a fixed seed.
///
/// For `random`, `dag` and `unweighted` with `m >= n - 1`, the first `n - 1`
/// arcs form a random tree rooted at vertex 0 so that every vertex is
/// reachable from it; the remaining arcs are uniform over the allowed pairs.
pub fn generate(spec: &GenSpec) -> Result<Graph, GenError> {
    let infeasible = |msg: String| Err(GenError::InfeasibleSpec(msg));
    match *spec {
        GenSpec::Random { n, m, wmax, seed } | GenSpec::Dag { n, m, wmax, seed } => {
            check_weight(wmax)?;
            let acyclic = matches!(spec, GenSpec::Dag { .. });
            let cap = pair_capacity(n, acyclic);
            if n == 0 || m > cap {
                return infeasible(format!("{spec}: at most {cap} arcs possible"));
            }
            Ok(random_graph(n, m, acyclic, seed, |rng| rng.gen_range(1..=wmax)))
        }
        GenSpec::Unweighted { n, m, seed } => {
            let cap = pair_capacity(n, false);
            if n == 0 || m > cap {
                return infeasible(format!("{spec}: at most {cap} arcs possible"));
            }
            Ok(random_graph(n, m, false, seed, |_| 1))
        }
        GenSpec::Grid { rows, cols, wmax, seed } => {
            check_weight(wmax)?;
            if rows == 0 || cols == 0 {
                return infeasible(format!("{spec}: empty grid"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let id = |r: usize, c: usize| r * cols + c;
            let mut edges = Vec::with_capacity(4 * rows * cols);
            for r in 0..rows {
                for c in 0..cols {
                    if c + 1 < cols {
                        edges.push((id(r, c), id(r, c + 1), rng.gen_range(1..=wmax)));
                        edges.push((id(r, c + 1), id(r, c), rng.gen_range(1..=wmax)));
                    }
                    if r + 1 < rows {
                        edges.push((id(r, c), id(r + 1, c), rng.gen_range(1..=wmax)));
                        edges.push((id(r + 1, c), id(r, c), rng.gen_range(1..=wmax)));
                    }
                }
            }
            Ok(Graph::from_checked(rows * cols, 0, &edges))
        }
        GenSpec::StarLast { n } => {
            if n < 2 {
                return infeasible(format!("{spec}: needs at least 2 vertices"));
            }
            let last = n - 1;
            let nw = n as u64;
            // Vertex i is reached directly from 0 at cost i, so settling
            // order is 0, 1, ..., n-1. The last vertex also has an arc from
            // n-2, and fans out to everybody with weight n.
            let mut edges: Vec<(usize, usize, u64)> = (1..n).map(|i| (0, i, i as u64)).collect();
            if last >= 2 {
                edges.push((last - 1, last, 1));
            }
            edges.extend((0..last).map(|i| (last, i, nw)));
            Ok(Graph::from_checked(n, 0, &edges))
        }
    }
}

fn check_weight(wmax: u64) -> Result<(), GenError> {
    if wmax == 0 || wmax > MAX_WEIGHT {
        return Err(GenError::InfeasibleSpec(format!(
            "wmax must be in 1..={MAX_WEIGHT}, got {wmax}"
        )));
    }
    Ok(())
}

fn pair_capacity(n: usize, acyclic: bool) -> usize {
    let all = n.saturating_mul(n.saturating_sub(1));
    if acyclic {
        all / 2
    } else {
        all
    }
}

fn random_graph(
    n: usize,
    m: usize,
    acyclic: bool,
    seed: u64,
    mut weight: impl FnMut(&mut ChaCha8Rng) -> u64,
) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // `order[i]` is the vertex at topological position i; vertex 0 first.
    let mut order: Vec<usize> = (0..n).collect();
    order[1..].shuffle(&mut rng);

    let mut seen: HashSet<(usize, usize)> = HashSet::with_capacity(m);
    let mut pairs = Vec::with_capacity(m);

    if m + 1 >= n {
        for pos in 1..n {
            let parent = order[rng.gen_range(0..pos)];
            let child = order[pos];
            seen.insert((parent, child));
            pairs.push((parent, child));
        }
    }

    let remaining = m - pairs.len();
    let cap = pair_capacity(n, acyclic);
    if remaining > 0 && 2 * m > cap {
        // Dense: enumerate every allowed pair and sample without replacement.
        let mut pool: Vec<(usize, usize)> = if acyclic {
            (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .map(|(i, j)| (order[i], order[j]))
                .filter(|p| !seen.contains(p))
                .collect()
        } else {
            (0..n)
                .flat_map(|u| (0..n).map(move |v| (u, v)))
                .filter(|&(u, v)| u != v && !seen.contains(&(u, v)))
                .collect()
        };
        let (chosen, _) = pool.partial_shuffle(&mut rng, remaining);
        pairs.extend_from_slice(chosen);
    } else {
        while pairs.len() < m {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a == b {
                continue;
            }
            let pair = if acyclic {
                let (lo, hi) = (a.min(b), a.max(b));
                (order[lo], order[hi])
            } else {
                (a, b)
            };
            if seen.insert(pair) {
                pairs.push(pair);
            }
        }
    }

    let edges: Vec<(usize, usize, u64)> =
        pairs.into_iter().map(|(u, v)| (u, v, weight(&mut rng))).collect();
    Graph::from_checked(n, 0, &edges)
}
