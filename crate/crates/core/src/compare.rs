//! Differential comparison of solver runs against the oracle.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::cost::Cost;
use crate::metrics::RunResult;
use crate::oracle::OracleResult;

/// Orderings between solvers that must hold on every input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// Total heap operations: sp2 <= sp1 <= dijkstra.
    HeapDominance,
    /// Per vertex fixing iteration: sp3 <= sp2 <= sp1.
    FixIteration,
    /// sp4 rounds at most n and at most the oracle's passes.
    Bounds,
}

impl Check {
    pub const ALL: [Check; 3] = [Check::HeapDominance, Check::FixIteration, Check::Bounds];

    pub fn as_str(self) -> &'static str {
        match self {
            Check::HeapDominance => "heap-dominance",
            Check::FixIteration => "fix-iteration",
            Check::Bounds => "bounds",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Check, String> {
        Check::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown check `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub algorithm: String,
    pub vertex: usize,
    pub got: Cost,
    pub expected: Cost,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub check: Check,
    pub claim: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricRow {
    pub algorithm: String,
    pub heap_inserts: u64,
    pub heap_adjusts: u64,
    pub heap_remove_mins: u64,
    pub heap_ops: u64,
    pub relaxations: u64,
    pub iterations: u64,
    pub rounds: u64,
    pub max_frontier: u64,
    pub fixed: usize,
    pub wall_time_ms: f64,
}

impl MetricRow {
    fn new(name: &str, r: &RunResult) -> MetricRow {
        let m = &r.metrics;
        MetricRow {
            algorithm: name.to_string(),
            heap_inserts: m.heap_inserts,
            heap_adjusts: m.heap_adjusts,
            heap_remove_mins: m.heap_remove_mins,
            heap_ops: m.heap_ops(),
            relaxations: m.relaxations,
            iterations: m.outer_iterations,
            rounds: m.rounds,
            max_frontier: m.max_frontier(),
            fixed: r.fixed_count(),
            wall_time_ms: m.wall_time.as_secs_f64() * 1e3,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CompareError {
    #[error("{algorithm}: dist[{vertex}] = {got}, oracle says {expected}")]
    DistMismatch {
        algorithm: String,
        vertex: usize,
        got: Cost,
        expected: Cost,
    },
    #[error("{check} violated: {detail}")]
    PropertyViolation { check: Check, detail: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub n: usize,
    pub oracle_iterations: u64,
    pub rows: Vec<MetricRow>,
    pub mismatches: Vec<Mismatch>,
    pub checks: Vec<CheckOutcome>,
}

/// Compares each named run with the oracle and evaluates every ordering
/// whose solvers are all present.
pub fn compare_runs(results: &[(&str, &RunResult)], oracle: &OracleResult) -> ComparisonReport {
    let mut mismatches = Vec::new();
    for &(name, r) in results {
        let bad = (0..oracle.dist.len()).find(|&v| r.dist.get(v) != Some(&oracle.dist[v]));
        if let Some(v) = bad {
            mismatches.push(Mismatch {
                algorithm: name.to_string(),
                vertex: v,
                got: r.dist.get(v).copied().unwrap_or(Cost::INFINITY),
                expected: oracle.dist[v],
            });
        }
    }

    let find = |name: &str| results.iter().find(|e| e.0 == name).map(|e| e.1);
    let mut checks = Vec::new();

    for (lo, hi) in [("sp2", "sp1"), ("sp1", "dijkstra")] {
        if let (Some(a), Some(b)) = (find(lo), find(hi)) {
            let (x, y) = (a.metrics.heap_ops(), b.metrics.heap_ops());
            checks.push(CheckOutcome {
                check: Check::HeapDominance,
                claim: format!("heap ops {lo} <= {hi}"),
                holds: x <= y,
                detail: format!("{x} vs {y}"),
            });
        }
    }

    for (early, late) in [("sp3", "sp2"), ("sp2", "sp1")] {
        if let (Some(a), Some(b)) = (find(early), find(late)) {
            let bad = (0..a.fixed_at_iteration.len()).find(|&v| {
                match (a.fixed_at_iteration[v], b.fixed_at_iteration.get(v).copied().flatten()) {
                    (Some(x), Some(y)) => x > y,
                    (None, Some(_)) => true,
                    _ => false,
                }
            });
            checks.push(CheckOutcome {
                check: Check::FixIteration,
                claim: format!("every vertex fixed by {early} no later than by {late}"),
                holds: bad.is_none(),
                detail: match bad {
                    Some(v) => format!(
                        "vertex {v}: {early} at {:?}, {late} at {:?}",
                        a.fixed_at_iteration[v], b.fixed_at_iteration[v]
                    ),
                    None => String::new(),
                },
            });
        }
    }

    if let Some(r) = find("sp4") {
        let rounds = r.metrics.rounds;
        let n = oracle.dist.len() as u64;
        checks.push(CheckOutcome {
            check: Check::Bounds,
            claim: "sp4 rounds <= n".to_string(),
            holds: rounds <= n,
            detail: format!("{rounds} vs {n}"),
        });
        checks.push(CheckOutcome {
            check: Check::Bounds,
            claim: "sp4 rounds <= oracle passes".to_string(),
            holds: rounds <= oracle.iterations,
            detail: format!("{rounds} vs {}", oracle.iterations),
        });
    }

    ComparisonReport {
        n: oracle.dist.len(),
        oracle_iterations: oracle.iterations,
        rows: results.iter().map(|&(name, r)| MetricRow::new(name, r)).collect(),
        mismatches,
        checks,
    }
}

impl ComparisonReport {
    /// Distance agreement only.
    pub fn check(&self) -> Result<(), CompareError> {
        match self.mismatches.first() {
            Some(m) => Err(CompareError::DistMismatch {
                algorithm: m.algorithm.clone(),
                vertex: m.vertex,
                got: m.got,
                expected: m.expected,
            }),
            None => Ok(()),
        }
    }

    /// Distance agreement, then every outcome of the selected checks.
    pub fn check_with(&self, selected: &[Check]) -> Result<(), CompareError> {
        self.check()?;
        match self.checks.iter().find(|c| selected.contains(&c.check) && !c.holds) {
            Some(c) => Err(CompareError::PropertyViolation {
                check: c.check,
                detail: format!("{} ({})", c.claim, c.detail),
            }),
            None => Ok(()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_table(&self) -> String {
        let header = [
            "algorithm", "inserts", "adjusts", "removeMins", "heap ops", "relax", "iters", "rounds", "max front",
            "fixed", "ms",
        ];
        let body: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.algorithm.clone(),
                    r.heap_inserts.to_string(),
                    r.heap_adjusts.to_string(),
                    r.heap_remove_mins.to_string(),
                    r.heap_ops.to_string(),
                    r.relaxations.to_string(),
                    r.iterations.to_string(),
                    r.rounds.to_string(),
                    r.max_frontier.to_string(),
                    r.fixed.to_string(),
                    format!("{:.3}", r.wall_time_ms),
                ]
            })
            .collect();
        let widths: Vec<usize> = (0..header.len())
            .map(|i| body.iter().map(|row| row[i].len()).chain([header[i].len()]).max().unwrap_or(0))
            .collect();

        let mut out = String::new();
        let line = |out: &mut String, cells: &[&str]| {
            for (i, cell) in cells.iter().enumerate() {
                if i == 0 {
                    let _ = write!(out, "{:<w$}", cell, w = widths[i]);
                } else {
                    let _ = write!(out, "  {:>w$}", cell, w = widths[i]);
                }
            }
            out.push('\n');
        };
        line(&mut out, &header);
        for row in &body {
            let cells: Vec<&str> = row.iter().map(String::as_str).collect();
            line(&mut out, &cells);
        }

        if self.mismatches.is_empty() {
            let _ = writeln!(out, "\ndistances: all agree with the oracle ({} passes)", self.oracle_iterations);
        } else {
            for m in &self.mismatches {
                let _ = writeln!(
                    out,
                    "\nMISMATCH {}: dist[{}] = {}, expected {}",
                    m.algorithm, m.vertex, m.got, m.expected
                );
            }
        }
        for c in &self.checks {
            let mark = if c.holds { "ok  " } else { "FAIL" };
            if c.detail.is_empty() {
                let _ = writeln!(out, "{mark} {:<15} {}", c.check.as_str(), c.claim);
            } else {
                let _ = writeln!(out, "{mark} {:<15} {} [{}]", c.check.as_str(), c.claim, c.detail);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::example_graph;
    use crate::oracle::bellman_ford_oracle;
    use crate::solver::{RunOptions, SolverRegistry};

    fn all_runs() -> Vec<(&'static str, RunResult)> {
        let g = example_graph();
        let reg = SolverRegistry::with_defaults();
        reg.iter()
            .map(|s| (s.name(), s.solve(&g, 0, &RunOptions::default()).unwrap()))
            .collect()
    }

    #[test]
    fn example_graph_all_agree() {
        let runs = all_runs();
        let oracle = bellman_ford_oracle(&example_graph(), 0);
        let named: Vec<(&str, &RunResult)> = runs.iter().map(|(n, r)| (*n, r)).collect();
        let report = compare_runs(&named, &oracle);
        assert!(report.mismatches.is_empty());
        assert!(report.checks.iter().all(|c| c.holds), "{}", report.to_table());
        assert_eq!(report.checks.len(), 6);
        report.check_with(&Check::ALL).unwrap();
        let sp1 = report.rows.iter().find(|r| r.algorithm == "sp1").unwrap();
        let dij = report.rows.iter().find(|r| r.algorithm == "dijkstra").unwrap();
        assert_eq!((sp1.heap_ops, dij.heap_ops), (6, 10));
    }

    #[test]
    fn corrupted_result_is_reported() {
        let runs = all_runs();
        let mut bad = runs[1].1.clone();
        bad.dist[3] = Cost::new(7);
        let oracle = bellman_ford_oracle(&example_graph(), 0);
        let report = compare_runs(&[("dijkstra", &runs[0].1), ("sp1", &bad)], &oracle);
        assert_eq!(
            report.check(),
            Err(CompareError::DistMismatch {
                algorithm: "sp1".into(),
                vertex: 3,
                got: Cost::new(7),
                expected: Cost::new(8),
            })
        );
    }

    #[test]
    fn violated_ordering_is_reported() {
        let runs = all_runs();
        let oracle = bellman_ford_oracle(&example_graph(), 0);
        // Dijkstra posing as sp2 does more heap work than sp1.
        let report = compare_runs(&[("sp2", &runs[0].1), ("sp1", &runs[1].1)], &oracle);
        assert!(matches!(
            report.check_with(&[Check::HeapDominance]),
            Err(CompareError::PropertyViolation { check: Check::HeapDominance, .. })
        ));
        assert!(report.check_with(&[Check::Bounds]).is_ok());
    }

    #[test]
    fn json_and_table_render() {
        let runs = all_runs();
        let oracle = bellman_ford_oracle(&example_graph(), 0);
        let named: Vec<(&str, &RunResult)> = runs.iter().map(|(n, r)| (*n, r)).collect();
        let report = compare_runs(&named, &oracle);
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(json["rows"].as_array().unwrap().len(), 6);
        assert_eq!(json["checks"][0]["check"], "heap-dominance");
        let table = report.to_table();
        assert!(table.starts_with("algorithm"));
        assert!(table.contains("all agree"));
    }

    #[test]
    fn check_names_round_trip() {
        for c in Check::ALL {
            assert_eq!(c.as_str().parse::<Check>().unwrap(), c);
        }
        assert!("nope".parse::<Check>().is_err());
    }
}
