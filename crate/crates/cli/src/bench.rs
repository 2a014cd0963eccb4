//! Runtime scaling over a grid of clause and variable counts.
//!
//! For each grid point a few seeded instances are solved. The table shows
//! medians, and a least-squares fit of `log t = a + b·log n + c·log m`
//! gives empirical exponents to set beside the cubic-in-both bound the
//! method claims. Nothing here passes or fails.

use std::io::Write;
use std::time::Instant;

use clap::Args;
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use maxsat2::oracle::{gen_instance, instance_seed, GenParams};
use maxsat2::search::{solve, Algorithm, SearchOptions};

use crate::CliError;

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Clause counts n, comma-separated.
    #[arg(long, default_value = "10,20,30,40,50", value_delimiter = ',')]
    pub clauses: Vec<u32>,
    /// Variable counts m, comma-separated.
    #[arg(long, default_value = "5,10,15,20", value_delimiter = ',')]
    pub vars: Vec<u32>,
    /// Instances per grid point.
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.1)]
    pub unit_fraction: f64,
    /// Layered-graph occurrences allowed per solve. Lower than the solver
    /// default so the full grid finishes in minutes on one core.
    #[arg(long, default_value_t = 500_000)]
    pub work_budget: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub n: u32,
    pub m: u32,
    pub median_ms: f64,
    pub median_trie_nodes: usize,
    pub median_span_edges: usize,
    pub median_recursive_calls: u64,
    pub max_recursive_calls: u64,
    pub max_depth: u32,
    pub median_work: u64,
    /// Runs stopped by the depth cap or work budget.
    pub truncated: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Fit {
    pub intercept: f64,
    pub n_exponent: f64,
    pub m_exponent: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub fit: Option<Fit>,
    pub claimed_n_exponent: f64,
    pub claimed_m_exponent: f64,
}

fn median<T: Copy + PartialOrd>(xs: &mut [T]) -> T {
    xs.sort_by(|a, b| a.partial_cmp(b).expect("comparable"));
    xs[xs.len() / 2]
}

pub fn run_bench(args: &BenchArgs) -> Result<BenchReport, CliError> {
    if args.reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    let opts = SearchOptions {
        algorithm: Algorithm::Improved,
        work_budget: args.work_budget,
        ..SearchOptions::default()
    };
    let mut rows = Vec::new();
    for &n in &args.clauses {
        for &m in &args.vars {
            let mut ms = Vec::new();
            let mut nodes = Vec::new();
            let mut spans = Vec::new();
            let mut calls = Vec::new();
            let mut work = Vec::new();
            let mut max_depth = 0;
            let mut truncated = 0;
            for rep in 0..args.reps {
                let seed = instance_seed(args.seed ^ ((n as u64) << 32 | m as u64), rep);
                let f = gen_instance(&GenParams {
                    num_vars: m,
                    num_clauses: n,
                    seed,
                    unit_fraction: args.unit_fraction,
                })?;
                let start = Instant::now();
                let r = solve(&f, &opts)?;
                ms.push(start.elapsed().as_secs_f64() * 1e3);
                let s = &r.dnf.stats;
                nodes.push(s.trie_nodes);
                spans.push(s.span_edges);
                calls.push(s.recursive_calls);
                work.push(s.work);
                max_depth = max_depth.max(s.max_depth_reached);
                truncated += usize::from(r.dnf.truncated);
            }
            rows.push(BenchRow {
                n,
                m,
                median_ms: median(&mut ms),
                median_trie_nodes: median(&mut nodes),
                median_span_edges: median(&mut spans),
                median_recursive_calls: median(&mut calls),
                max_recursive_calls: calls.iter().copied().max().unwrap_or(0),
                max_depth,
                median_work: median(&mut work),
                truncated,
            });
        }
    }
    let fit = fit_exponents(&rows);
    Ok(BenchReport {
        rows,
        fit,
        claimed_n_exponent: 3.0,
        claimed_m_exponent: 3.0,
    })
}

/// Least squares over rows with positive time. Needs at least three points
/// spread over both axes.
pub fn fit_exponents(rows: &[BenchRow]) -> Option<Fit> {
    let pts: Vec<&BenchRow> = rows.iter().filter(|r| r.median_ms > 0.0).collect();
    if pts.len() < 3 {
        return None;
    }
    let a = DMatrix::from_fn(pts.len(), 3, |i, j| match j {
        0 => 1.0,
        1 => (pts[i].n as f64).ln(),
        _ => (pts[i].m as f64).ln(),
    });
    let b = DVector::from_fn(pts.len(), |i, _| pts[i].median_ms.ln());
    let x = a.svd(true, true).solve(&b, 1e-12).ok()?;
    if x.iter().any(|v| !v.is_finite()) {
        return None;
    }
    Some(Fit {
        intercept: x[0],
        n_exponent: x[1],
        m_exponent: x[2],
        points: pts.len(),
    })
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let report = run_bench(args)?;
    let err = |source| CliError::Io {
        path: "<stdout>".into(),
        source,
    };
    if args.json {
        writeln!(out, "{}", serde_json::to_string(&report).expect("serializable")).map_err(err)?;
        return Ok(0);
    }
    writeln!(
        out,
        "{:>4} {:>4} {:>11} {:>7} {:>7} {:>7} {:>7} {:>5} {:>9} {:>5}",
        "n", "m", "median_ms", "nodes", "spans", "calls", "max", "depth", "work", "trunc"
    )
    .map_err(err)?;
    for r in &report.rows {
        writeln!(
            out,
            "{:>4} {:>4} {:>11.3} {:>7} {:>7} {:>7} {:>7} {:>5} {:>9} {:>5}",
            r.n,
            r.m,
            r.median_ms,
            r.median_trie_nodes,
            r.median_span_edges,
            r.median_recursive_calls,
            r.max_recursive_calls,
            r.max_depth,
            r.median_work,
            r.truncated
        )
        .map_err(err)?;
    }
    match &report.fit {
        Some(f) => writeln!(
            out,
            "fit: t ≈ {:.3e} · n^{:.2} · m^{:.2} over {} points (claimed bound n^{} m^{})",
            f.intercept.exp(),
            f.n_exponent,
            f.m_exponent,
            f.points,
            report.claimed_n_exponent,
            report.claimed_m_exponent
        ),
        None => writeln!(out, "fit: not enough points"),
    }
    .map_err(err)?;
    Ok(0)
}
