use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use serde::Serialize;
use sssp_lab::bench::{bench_solver, BenchRow};
use sssp_lab::{
    bellman_ford_oracle, compare_runs, generate, parse_dimacs, run_on_original, serialize_dimacs, Check, CompareError,
    ComparisonReport, Cost, GenSpec, Graph, RunOptions, RunResult, ShortestPathSolver, SolveError, SolverRegistry,
};

use crate::args::{BenchArgs, CompareArgs, Format, GenArgs, GraphInput, Parallel, RunArgs, SolveFlags};

/// Why a command did not succeed, ordered by exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or input: exit 1.
    Validation(anyhow::Error),
    /// A solver disagreed with the oracle: exit 2.
    Mismatch(String),
    /// An ordering or invariant check failed: exit 3.
    Property(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Mismatch(_) => 2,
            Failure::Property(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Validation(e) => write!(f, "{e:#}"),
            Failure::Mismatch(m) => write!(f, "distance mismatch: {m}"),
            Failure::Property(m) => write!(f, "property violation: {m}"),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Failure {
        Failure::Validation(e)
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Failure {
        match e {
            SolveError::SourceOutOfRange { .. } => Failure::Validation(e.into()),
            SolveError::Heap(_) | SolveError::InvariantViolation { .. } => Failure::Property(e.to_string()),
        }
    }
}

impl From<CompareError> for Failure {
    fn from(e: CompareError) -> Failure {
        match e {
            CompareError::DistMismatch { .. } => Failure::Mismatch(e.to_string()),
            CompareError::PropertyViolation { .. } => Failure::Property(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

struct Input {
    label: String,
    graph: Graph,
}

fn load_file(path: &Path) -> anyhow::Result<Input> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let graph = parse_dimacs(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(Input {
        label: path.display().to_string(),
        graph,
    })
}

fn load_spec(spec: &GenSpec) -> anyhow::Result<Input> {
    Ok(Input {
        label: spec.to_string(),
        graph: generate(spec)?,
    })
}

fn seeded(spec: &GenSpec, seed: Option<u64>) -> GenSpec {
    match seed {
        Some(s) => spec.clone().with_seed(s),
        None => spec.clone(),
    }
}

fn load(input: &GraphInput, seed: Option<u64>) -> anyhow::Result<Input> {
    match (&input.graph, &input.spec) {
        (Some(path), _) => load_file(path),
        (None, Some(spec)) => load_spec(&seeded(spec, seed)),
        (None, None) => bail!("one of --graph or --gen is required"),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn options(debug_invariants: bool, parallel: Parallel) -> RunOptions {
    RunOptions {
        debug_invariants,
        parallel: parallel == Parallel::On,
    }
}

/// Expands `all` and rejects unknown or repeated names.
fn select<'r>(registry: &'r SolverRegistry, names: &[String]) -> anyhow::Result<Vec<&'r dyn ShortestPathSolver>> {
    let mut picked: Vec<&dyn ShortestPathSolver> = Vec::new();
    for name in names {
        let batch: Vec<&dyn ShortestPathSolver> = if name == "all" {
            registry.iter().filter(|s| s.name() != "oracle").collect()
        } else {
            let s = registry
                .get(name)
                .ok_or_else(|| anyhow!("unknown algorithm `{name}`; known: {}", registry.names().join(", ")))?;
            vec![s]
        };
        for s in batch {
            if !picked.iter().any(|p| p.name() == s.name()) {
                picked.push(s);
            }
        }
    }
    Ok(picked)
}

fn csv_text(write: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    write(&mut w)?;
    let bytes = w.into_inner().map_err(|e| anyhow!("flushing csv: {e}"))?;
    Ok(String::from_utf8(bytes)?)
}

/// Left-aligned columns separated by two spaces.
fn align(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}

fn show_cost(c: Cost) -> String {
    c.to_string()
}

fn show_iteration(i: Option<u32>) -> String {
    i.map_or_else(|| "-".to_string(), |i| i.to_string())
}

pub fn cmd_gen(args: &GenArgs) -> Outcome {
    let spec = seeded(&args.spec, args.seed);
    let graph = generate(&spec).map_err(anyhow::Error::from)?;
    let text = serialize_dimacs(&graph, Some(&spec.to_string()));
    emit(&args.out, &text)?;
    Ok(())
}

#[derive(Serialize)]
struct RunReport<'a> {
    algorithm: &'a str,
    graph: &'a str,
    n: usize,
    m: usize,
    source: usize,
    /// Vertices deleted by pruning before the solver ran.
    pruned: &'a [usize],
    dist: &'a [Cost],
    fixed_at_iteration: &'a [Option<u32>],
    metrics: &'a sssp_lab::Metrics,
}

pub fn cmd_run(args: &RunArgs) -> Outcome {
    let registry = SolverRegistry::with_defaults();
    if args.algo == "all" {
        return Err(Failure::Validation(anyhow!("run takes a single algorithm; use compare for several")));
    }
    let solver = select(&registry, std::slice::from_ref(&args.algo))?[0];
    let flags: &SolveFlags = &args.flags;
    let input = load(&args.input, flags.seed)?;
    let run = run_on_original(
        solver,
        &input.graph,
        flags.source,
        &options(flags.debug_invariants, flags.parallel),
    )?;
    let r: &RunResult = &run.result;
    let report = RunReport {
        algorithm: solver.name(),
        graph: &input.label,
        n: input.graph.n(),
        m: input.graph.m(),
        source: flags.source,
        pruned: &run.pruned,
        dist: &r.dist,
        fixed_at_iteration: &r.fixed_at_iteration,
        metrics: &r.metrics,
    };
    let text = match flags.format {
        Format::Json => serde_json::to_string_pretty(&report).context("serializing result")? + "\n",
        Format::Csv => csv_text(|w| {
            w.write_record(["vertex", "dist", "fixed_at_iteration"])?;
            for v in 0..r.dist.len() {
                w.write_record([v.to_string(), show_cost(r.dist[v]), show_iteration(r.fixed_at_iteration[v])])?;
            }
            Ok(())
        })?,
        Format::Table => {
            let m = &r.metrics;
            let mut out = format!(
                "{} on {} (n={}, m={}, source {})\npruned {} vertices: {:?}\n",
                report.algorithm,
                report.graph,
                report.n,
                report.m,
                report.source,
                run.pruned.len(),
                run.pruned
            );
            out += &format!(
                "heap inserts {}, adjusts {}, removeMins {}; relaxations {}; iterations {}; rounds {}; max frontier {}; {:.3} ms\n\n",
                m.heap_inserts,
                m.heap_adjusts,
                m.heap_remove_mins,
                m.relaxations,
                m.outer_iterations,
                m.rounds,
                m.max_frontier(),
                m.wall_time.as_secs_f64() * 1e3
            );
            let rows: Vec<Vec<String>> = (0..r.dist.len())
                .map(|v| vec![v.to_string(), show_cost(r.dist[v]), show_iteration(r.fixed_at_iteration[v])])
                .collect();
            out + &align(&["vertex", "dist", "fixed at"], &rows)
        }
    };
    emit(&flags.out, &text)?;
    Ok(())
}

#[derive(Serialize)]
struct GraphComparison {
    graph: String,
    pruned: Vec<usize>,
    /// `ok`, or the first failure under the selected checks.
    status: String,
    report: ComparisonReport,
}

#[derive(Serialize)]
struct CompareSummary {
    graphs: usize,
    failed: usize,
    results: Vec<GraphComparison>,
}

pub fn cmd_compare(args: &CompareArgs) -> Outcome {
    let registry = SolverRegistry::with_defaults();
    let solvers = select(&registry, &args.algo)?;
    if solvers.len() < 2 {
        return Err(Failure::Validation(anyhow!("compare needs at least two algorithms")));
    }
    if args.count == 0 {
        return Err(Failure::Validation(anyhow!("--count must be at least 1")));
    }
    let flags = &args.flags;
    let inputs: Vec<Input> = match (&args.input.graph, &args.input.spec) {
        (Some(_), _) if args.count > 1 => {
            return Err(Failure::Validation(anyhow!("--count applies to --gen only")));
        }
        (None, Some(spec)) => {
            let base = flags.seed.or(spec.seed()).unwrap_or(0);
            let specs: Vec<GenSpec> = if spec.seed().is_none() {
                vec![spec.clone()]
            } else {
                (0..args.count).map(|i| spec.clone().with_seed(base + i)).collect()
            };
            specs.iter().map(load_spec).collect::<anyhow::Result<_>>()?
        }
        _ => vec![load(&args.input, flags.seed)?],
    };
    let checks: Vec<Check> = if args.check.is_empty() {
        Check::ALL.to_vec()
    } else {
        args.check.clone()
    };
    let opts = options(flags.debug_invariants, flags.parallel);

    let mut results = Vec::with_capacity(inputs.len());
    let mut worst: Option<Failure> = None;
    for input in &inputs {
        if flags.source >= input.graph.n() {
            return Err(SolveError::SourceOutOfRange {
                vertex: flags.source,
                n: input.graph.n(),
            }
            .into());
        }
        let oracle = bellman_ford_oracle(&input.graph, flags.source);
        let mut runs = Vec::with_capacity(solvers.len());
        let mut pruned = Vec::new();
        for &s in &solvers {
            let run = run_on_original(s, &input.graph, flags.source, &opts)?;
            if s.needs_pruning() {
                pruned = run.pruned;
            }
            runs.push((s.name(), run.result));
        }
        let named: Vec<(&str, &RunResult)> = runs.iter().map(|(n, r)| (*n, r)).collect();
        let report = compare_runs(&named, &oracle);
        let status = match report.check_with(&checks) {
            Ok(()) => "ok".to_string(),
            Err(e) => {
                let msg = format!("{}: {e}", input.label);
                let failure = Failure::from(e);
                let failure = match failure {
                    Failure::Mismatch(_) => Failure::Mismatch(msg.clone()),
                    Failure::Property(_) => Failure::Property(msg.clone()),
                    other => other,
                };
                if worst.as_ref().is_none_or(|w| failure.exit_code() < w.exit_code()) {
                    worst = Some(failure);
                }
                msg
            }
        };
        results.push(GraphComparison {
            graph: input.label.clone(),
            pruned,
            status,
            report,
        });
    }

    let failed = results.iter().filter(|r| r.status != "ok").count();
    let text = match flags.format {
        Format::Json => {
            let summary = CompareSummary {
                graphs: results.len(),
                failed,
                results,
            };
            serde_json::to_string_pretty(&summary).context("serializing report")? + "\n"
        }
        Format::Csv => csv_text(|w| {
            w.write_record([
                "graph", "algorithm", "heap_inserts", "heap_adjusts", "heap_remove_mins", "heap_ops", "relaxations",
                "iterations", "rounds", "max_frontier", "fixed", "wall_time_ms", "status",
            ])?;
            for g in &results {
                for row in &g.report.rows {
                    w.write_record([
                        g.graph.clone(),
                        row.algorithm.clone(),
                        row.heap_inserts.to_string(),
                        row.heap_adjusts.to_string(),
                        row.heap_remove_mins.to_string(),
                        row.heap_ops.to_string(),
                        row.relaxations.to_string(),
                        row.iterations.to_string(),
                        row.rounds.to_string(),
                        row.max_frontier.to_string(),
                        row.fixed.to_string(),
                        format!("{:.3}", row.wall_time_ms),
                        g.status.clone(),
                    ])?;
                }
            }
            Ok(())
        })?,
        Format::Table => {
            let mut out = String::new();
            for g in &results {
                out += &format!(
                    "== {} (n={}, pruned {}, oracle passes {})\n",
                    g.graph,
                    g.report.n,
                    g.pruned.len(),
                    g.report.oracle_iterations
                );
                out += &g.report.to_table();
                out += &format!("status: {}\n\n", g.status);
            }
            out + &format!("{} graphs, {failed} failed\n", results.len())
        }
    };
    emit(&flags.out, &text)?;
    match worst {
        Some(f) => Err(f),
        None => Ok(()),
    }
}

pub fn cmd_bench(args: &BenchArgs) -> Outcome {
    let registry = SolverRegistry::with_defaults();
    let solvers = select(&registry, &args.algo)?;
    if args.graph.is_empty() && args.spec.is_empty() {
        return Err(Failure::Validation(anyhow!("bench needs at least one --graph or --gen")));
    }
    let opts = options(false, args.parallel);
    let mut inputs = Vec::new();
    for path in &args.graph {
        inputs.push(load_file(path)?);
    }
    for spec in &args.spec {
        inputs.push(load_spec(&seeded(spec, args.seed))?);
    }

    let mut rows: Vec<BenchRow> = Vec::new();
    for input in &inputs {
        for &s in &solvers {
            let (row, _) = bench_solver(s, &input.label, &input.graph, args.source, args.reps, &opts)?;
            rows.push(row);
        }
    }

    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&rows).context("serializing rows")? + "\n",
        Format::Csv => csv_text(|w| {
            for row in &rows {
                w.serialize(row)?;
            }
            Ok(())
        })?,
        Format::Table => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.graph.clone(),
                        r.algorithm.clone(),
                        r.n.to_string(),
                        r.m.to_string(),
                        r.heap_ops.to_string(),
                        r.relaxations.to_string(),
                        r.iterations.to_string(),
                        r.rounds.to_string(),
                        r.max_frontier.to_string(),
                        r.reps.to_string(),
                        format!("{:.3}", r.wall_time_ms),
                    ]
                })
                .collect();
            align(
                &["graph", "algorithm", "n", "m", "heap ops", "relax", "iters", "rounds", "max front", "reps", "ms"],
                &body,
            )
        }
    };
    emit(&args.out, &text)?;
    Ok(())
}
