//! Command-line front end: argument types, subcommand runners and the
//! scaling benchmark. `main.rs` only parses arguments and maps errors to
//! exit codes.

pub mod bench;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use maxsat2::dot::{layered_level_to_dot, pstar_to_dot, trie_to_dot};
use maxsat2::formula::{
    count_satisfied_clauses, parse_cnf, parse_dnf, satisfied_clause_ids, satisfied_conjunction_ids,
    Assignment, CnfFormula, DnfFormula, ParseError, ParseMode, Variable,
};
use maxsat2::oracle::{
    gen_instance, oracle_dnf_max, oracle_maxsat, run_diff, DiffError, DiffParams, GenParams,
    OracleError, SizeRange, DEFAULT_VAR_CAP,
};
use maxsat2::pstar::build_p_star_graph;
use maxsat2::reduction::{reduce, ReductionError};
use maxsat2::search::{build_layered, solve, solve_dnf, Algorithm, SearchOptions, SearchStats, SolveError};
use maxsat2::sequencing::{build_sequences, TieBreak};
use maxsat2::triegraph::{build_graph, TrieError};

#[derive(Debug, Parser)]
#[command(name = "maxsat2", version, about = "2-MAXSAT via DNF reduction and trie-like graph search")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a CNF or DNF instance.
    Solve(SolveArgs),
    /// Print the DNF reduction of a CNF instance.
    Reduce(InputArgs),
    /// Solve exhaustively.
    Oracle(OracleArgs),
    /// Compare the search against the exhaustive optimum on random instances.
    Diff(DiffArgs),
    /// Generate a random 2-CNF instance.
    Gen(GenArgs),
    /// Time the search over a grid of instance sizes.
    Bench(bench::BenchArgs),
    /// Emit Graphviz for the trie-like graph, a p*-graph, or a layer.
    Dot(DotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Cnf,
    Dnf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgorithmArg {
    Basic,
    Improved,
    Oracle,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Input file, or `-` for standard input.
    #[arg(default_value = "-")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Cnf)]
    pub format: Format,
    /// Accept CNF clauses with more than two literals (the reduction still
    /// rejects them).
    #[arg(long)]
    pub permissive: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Variable ordering: `default`, or `explicit:2,3,1,...`.
    #[arg(long, default_value = "default")]
    pub order: String,
    #[arg(long)]
    pub no_prune: bool,
    #[arg(long)]
    pub no_case2_check: bool,
    #[arg(long)]
    pub max_depth: Option<u32>,
    #[arg(long, default_value_t = 2_000_000)]
    pub work_budget: u64,
}

impl SearchArgs {
    pub fn options(&self, algorithm: Algorithm) -> Result<SearchOptions, CliError> {
        Ok(SearchOptions {
            algorithm,
            tie_break: parse_order(&self.order)?,
            prune: !self.no_prune,
            case2_check: !self.no_case2_check,
            max_depth: self.max_depth,
            work_budget: self.work_budget,
            trace: false,
            check_candidates: false,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long, value_enum, default_value_t = AlgorithmArg::Improved)]
    pub algorithm: AlgorithmArg,
    #[arg(long)]
    pub json: bool,
    /// Write recursive-call events as JSON lines to this file.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Write the trie-like graph as DOT to this file.
    #[arg(long)]
    pub dot: Option<PathBuf>,
    /// Write one DOT file per layer of the layered graph into this directory.
    #[arg(long)]
    pub dot_levels: Option<PathBuf>,
    /// Also run the exhaustive oracle and report agreement.
    #[arg(long)]
    pub check: bool,
    /// Include wall time in the output.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = DEFAULT_VAR_CAP)]
    pub cap: u32,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct DiffArgs {
    /// Variables per instance, `5` or `2..8`.
    #[arg(long, default_value = "5")]
    pub vars: String,
    /// Clauses per instance, `6` or `1..10`.
    #[arg(long, default_value = "6")]
    pub clauses: String,
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.1)]
    pub unit_fraction: f64,
    #[arg(long, value_enum, default_value_t = AlgorithmArg::Improved)]
    pub algorithm: AlgorithmArg,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Directory for shrunk counterexamples as DIMACS files.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Replay stored DIMACS fixtures instead of generating instances.
    #[arg(long, num_args = 1..)]
    pub replay: Vec<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub vars: u32,
    #[arg(long)]
    pub clauses: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.0)]
    pub unit_fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DotWhat {
    Trie,
    Pstar,
    Level,
}

#[derive(Debug, Clone, Args)]
pub struct DotArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "default")]
    pub order: String,
    #[arg(long, value_enum, default_value_t = DotWhat::Trie)]
    pub what: DotWhat,
    /// Conjunction id for `pstar`, level number for `level`.
    #[arg(long, default_value_t = 1)]
    pub index: usize,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Graph(#[from] TrieError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Solve(SolveError),
    #[error(transparent)]
    Diff(DiffError),
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Reduction(r) => CliError::Reduction(r),
            SolveError::Graph(g) => CliError::Graph(g),
            s @ SolveError::Soundness(_) => CliError::Solve(s),
        }
    }
}

impl CliError {
    /// 1 for bad input, 2 for a failed soundness gate.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Solve(SolveError::Soundness(_)) | CliError::Diff(DiffError::Soundness { .. }) => 2,
            _ => 1,
        }
    }
}

/// Exit code for a successful run: 3 if a resource cap cut the search short.
pub const EXIT_CAP_HIT: u8 = 3;

pub fn parse_order(s: &str) -> Result<TieBreak, CliError> {
    if s == "default" {
        return Ok(TieBreak::ByIndex);
    }
    let list = s
        .strip_prefix("explicit:")
        .ok_or_else(|| CliError::Usage(format!("unknown ordering `{s}`")))?;
    let vars = list
        .split(',')
        .map(|t| match t.trim().parse::<u32>() {
            Ok(i) if i >= 1 => Ok(Variable::new(i)),
            _ => Err(CliError::Usage(format!("bad variable `{t}` in ordering"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TieBreak::Explicit(vars))
}

fn read_input(path: &Path) -> Result<String, CliError> {
    let io_err = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(io_err)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(io_err)
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn out_err(source: io::Error) -> CliError {
    CliError::Io {
        path: "<stdout>".into(),
        source,
    }
}

enum Instance {
    Cnf(CnfFormula),
    Dnf(DnfFormula),
}

fn load(args: &InputArgs) -> Result<Instance, CliError> {
    let text = read_input(&args.input)?;
    Ok(match args.format {
        Format::Cnf => {
            let mode = if args.permissive { ParseMode::Permissive } else { ParseMode::Strict };
            Instance::Cnf(parse_cnf(&text, mode)?)
        }
        Format::Dnf => Instance::Dnf(parse_dnf(&text)?),
    })
}

/// The DNF a graph is built from: the reduction for CNF input.
fn as_dnf(inst: &Instance) -> Result<DnfFormula, CliError> {
    Ok(match inst {
        Instance::Cnf(f) => reduce(f)?.0,
        Instance::Dnf(d) => d.clone(),
    })
}

#[derive(Debug, Serialize)]
pub struct InstanceInfo {
    pub format: Format,
    pub vars: u32,
    pub clauses: usize,
}

#[derive(Debug, Serialize)]
pub struct Agreement {
    pub oracle_size: usize,
    pub agrees: bool,
}

#[derive(Debug, Serialize)]
pub struct SolveReport {
    pub instance: InstanceInfo,
    pub algorithm: AlgorithmArg,
    pub best_size: usize,
    /// Clause ids for CNF input, conjunction ids for DNF input.
    pub satisfied_ids: Vec<u32>,
    /// For CNF input: clauses true under the assignment.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clauses_satisfied: Option<usize>,
    /// For CNF input: the conjunctions of the reduction behind the answer.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conj_ids: Option<Vec<u32>>,
    pub assignment: Vec<u8>,
    pub truncated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<SearchStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<Agreement>,
}

fn bits(a: &Assignment) -> Vec<u8> {
    a.values().iter().map(|&b| u8::from(b)).collect()
}

pub fn cmd_solve(args: &SolveArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let inst = load(&args.input)?;
    let mut opts = args.search.options(match args.algorithm {
        AlgorithmArg::Basic => Algorithm::Basic,
        _ => Algorithm::Improved,
    })?;
    opts.trace = args.trace.is_some();

    if args.dot.is_some() || args.dot_levels.is_some() {
        let (_, g) = build_graph(&as_dnf(&inst)?, &opts.tie_break)?;
        if let Some(path) = &args.dot {
            write_file(path, &trie_to_dot(&g))?;
        }
        if let Some(dir) = &args.dot_levels {
            fs::create_dir_all(dir).map_err(|source| CliError::Io {
                path: dir.display().to_string(),
                source,
            })?;
            let budget = usize::try_from(opts.work_budget).unwrap_or(usize::MAX);
            let (lg, _) = build_layered(&g, budget);
            for level in 1..=lg.num_levels() {
                write_file(&dir.join(format!("level_{level}.dot")), &layered_level_to_dot(&g, &lg, level))?;
            }
        }
    }

    let mut report = match (&inst, args.algorithm) {
        (Instance::Cnf(f), AlgorithmArg::Oracle) => {
            let (opt, w) = oracle_maxsat(f, DEFAULT_VAR_CAP)?;
            SolveReport {
                instance: info(&inst),
                algorithm: args.algorithm,
                best_size: opt,
                satisfied_ids: satisfied_clause_ids(f, &w),
                clauses_satisfied: Some(opt),
                conj_ids: None,
                assignment: bits(&w),
                truncated: false,
                stats: None,
                agreement: None,
            }
        }
        (Instance::Dnf(d), AlgorithmArg::Oracle) => {
            let (opt, w) = oracle_dnf_max(d, DEFAULT_VAR_CAP)?;
            SolveReport {
                instance: info(&inst),
                algorithm: args.algorithm,
                best_size: opt,
                satisfied_ids: satisfied_conjunction_ids(d, &w),
                clauses_satisfied: None,
                conj_ids: None,
                assignment: bits(&w),
                truncated: false,
                stats: None,
                agreement: None,
            }
        }
        (Instance::Cnf(f), _) => {
            let r = solve(f, &opts)?;
            write_trace(args, &r.dnf.trace)?;
            SolveReport {
                instance: info(&inst),
                algorithm: args.algorithm,
                best_size: r.best_size,
                satisfied_ids: r.satisfied_clause_ids,
                clauses_satisfied: Some(r.clauses_satisfied),
                conj_ids: Some(r.dnf.best_conj_ids),
                assignment: bits(&r.assignment),
                truncated: r.dnf.truncated,
                stats: Some(r.dnf.stats),
                agreement: None,
            }
        }
        (Instance::Dnf(d), _) => {
            let r = solve_dnf(d, &opts)?;
            write_trace(args, &r.trace)?;
            SolveReport {
                instance: info(&inst),
                algorithm: args.algorithm,
                best_size: r.best_size,
                satisfied_ids: r.best_conj_ids,
                clauses_satisfied: None,
                conj_ids: None,
                assignment: bits(&r.best_assignment),
                truncated: r.truncated,
                stats: Some(r.stats),
                agreement: None,
            }
        }
    };
    if !args.timing {
        if let Some(s) = report.stats.as_mut() {
            s.elapsed_ms = None;
        }
    }
    if args.check {
        let oracle_size = match &inst {
            Instance::Cnf(f) => oracle_maxsat(f, DEFAULT_VAR_CAP)?.0,
            Instance::Dnf(d) => oracle_dnf_max(d, DEFAULT_VAR_CAP)?.0,
        };
        report.agreement = Some(Agreement {
            oracle_size,
            agrees: oracle_size == report.best_size,
        });
    }

    if args.json {
        let line = serde_json::to_string(&report).expect("serializable");
        writeln!(out, "{line}").map_err(out_err)?;
    } else {
        print_report(&report, out).map_err(out_err)?;
    }
    Ok(if report.truncated { EXIT_CAP_HIT } else { 0 })
}

fn info(inst: &Instance) -> InstanceInfo {
    match inst {
        Instance::Cnf(f) => InstanceInfo {
            format: Format::Cnf,
            vars: f.num_vars,
            clauses: f.clauses.len(),
        },
        Instance::Dnf(d) => InstanceInfo {
            format: Format::Dnf,
            vars: d.num_vars,
            clauses: d.conjunctions.len(),
        },
    }
}

fn write_trace(args: &SolveArgs, events: &[maxsat2::search::TraceEvent]) -> Result<(), CliError> {
    let Some(path) = &args.trace else { return Ok(()) };
    let mut text = String::new();
    for e in events {
        text.push_str(&serde_json::to_string(e).expect("serializable"));
        text.push('\n');
    }
    write_file(path, &text)
}

fn join(ids: &[u32]) -> String {
    ids.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
}

fn print_report(r: &SolveReport, out: &mut dyn Write) -> io::Result<()> {
    let unit = match r.instance.format {
        Format::Cnf => "clauses",
        Format::Dnf => "conjunctions",
    };
    writeln!(out, "{} of {} {unit}", r.best_size, r.instance.clauses)?;
    writeln!(out, "satisfied {unit}: {}", join(&r.satisfied_ids))?;
    if let Some(c) = r.clauses_satisfied {
        if c != r.best_size {
            writeln!(out, "clauses true under the assignment: {c}")?;
        }
    }
    if let Some(ids) = &r.conj_ids {
        writeln!(out, "conjunctions: {}", join(ids))?;
    }
    let a: Vec<String> = r.assignment.iter().map(|b| b.to_string()).collect();
    writeln!(out, "assignment: {}", a.join(" "))?;
    if let Some(s) = &r.stats {
        write!(
            out,
            "stats: nodes={} spans={} levels={} recursive_calls={} merges={}/{}/{} pruned={} no_progress={} depth_cap_hits={} work={}",
            s.trie_nodes,
            s.span_edges,
            s.levels_built,
            s.recursive_calls,
            s.merges_case1,
            s.merges_case2,
            s.merges_case3,
            s.pruned_calls,
            s.skipped_no_progress,
            s.depth_cap_hits,
            s.work
        )?;
        if let Some(ms) = s.elapsed_ms {
            write!(out, " elapsed_ms={ms:.3}")?;
        }
        writeln!(out)?;
    }
    if r.truncated {
        writeln!(out, "warning: search truncated by a depth or work cap")?;
    }
    if let Some(a) = &r.agreement {
        writeln!(out, "oracle: {} ({})", a.oracle_size, if a.agrees { "agrees" } else { "shortfall" })?;
    }
    Ok(())
}

pub fn cmd_reduce(args: &InputArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let Instance::Cnf(f) = load(args)? else {
        return Err(CliError::Usage("reduce takes CNF input".into()));
    };
    let (d, _) = reduce(&f)?;
    write!(out, "{}", d.to_dimacs()).map_err(out_err)?;
    Ok(0)
}

pub fn cmd_oracle(args: &OracleArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let inst = load(&args.input)?;
    let (opt, w, ids) = match &inst {
        Instance::Cnf(f) => {
            let (opt, w) = oracle_maxsat(f, args.cap)?;
            let ids = satisfied_clause_ids(f, &w);
            debug_assert_eq!(count_satisfied_clauses(f, &w), opt);
            (opt, w, ids)
        }
        Instance::Dnf(d) => {
            let (opt, w) = oracle_dnf_max(d, args.cap)?;
            let ids = satisfied_conjunction_ids(d, &w);
            (opt, w, ids)
        }
    };
    if args.json {
        let v = serde_json::json!({
            "instance": info(&inst),
            "optimum": opt,
            "satisfied_ids": ids,
            "assignment": bits(&w),
        });
        writeln!(out, "{v}").map_err(out_err)?;
    } else {
        writeln!(out, "optimum: {opt}").map_err(out_err)?;
        writeln!(out, "satisfied: {}", join(&ids)).map_err(out_err)?;
        writeln!(out, "assignment: {w}").map_err(out_err)?;
    }
    Ok(0)
}

#[derive(Debug, Serialize)]
pub struct ReplayRecord {
    pub path: String,
    pub solver_size: usize,
    pub oracle_size: usize,
}

pub fn cmd_diff(args: &DiffArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let algorithm = match args.algorithm {
        AlgorithmArg::Basic => Algorithm::Basic,
        AlgorithmArg::Improved => Algorithm::Improved,
        AlgorithmArg::Oracle => return Err(CliError::Usage("diff compares a search algorithm against the oracle".into())),
    };
    let options = args.search.options(algorithm)?;

    if !args.replay.is_empty() {
        let mut records = Vec::new();
        for path in &args.replay {
            let f = parse_cnf(&read_input(path)?, ParseMode::Strict)?;
            let (s, o, _) = maxsat2::oracle::compare(&f, &options).map_err(|e| match e {
                maxsat2::oracle::DiffCaseError::Solve(s) => CliError::from(s),
                maxsat2::oracle::DiffCaseError::Oracle(o) => CliError::Oracle(o),
            })?;
            records.push(ReplayRecord {
                path: path.display().to_string(),
                solver_size: s,
                oracle_size: o,
            });
        }
        let line = serde_json::to_string(&records).expect("serializable");
        writeln!(out, "{line}").map_err(out_err)?;
        return Ok(0);
    }

    let params = DiffParams {
        vars: args.vars.parse::<SizeRange>()?,
        clauses: args.clauses.parse::<SizeRange>()?,
        unit_fraction: args.unit_fraction,
        seed: args.seed,
        count: args.count,
        options,
    };
    let report = run_diff(&params).map_err(CliError::Diff)?;
    if let Some(dir) = &args.out_dir {
        write_shortfalls(dir, &report)?;
    }
    let line = serde_json::to_string(&report).expect("serializable");
    writeln!(out, "{line}").map_err(out_err)?;
    Ok(0)
}

/// Writes each shrunk shortfall as `shortfall_<index>.cnf` with its sizes
/// in a comment header.
pub fn write_shortfalls(dir: &Path, report: &maxsat2::oracle::DiffReport) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let mut paths = Vec::new();
    for s in &report.shortfalls {
        let path = dir.join(format!("shortfall_{:05}.cnf", s.index));
        let text = format!(
            "c shrunk shortfall from diff seed {} instance {}\nc solver {} oracle {}\n{}",
            report.params.seed, s.index, s.minimized_solver_size, s.minimized_oracle_size, s.minimized
        );
        write_file(&path, &text)?;
        paths.push(path);
    }
    Ok(paths)
}

pub fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let f = gen_instance(&GenParams {
        num_vars: args.vars,
        num_clauses: args.clauses,
        seed: args.seed,
        unit_fraction: args.unit_fraction,
    })?;
    write!(out, "c seed {}\n{}", args.seed, f.to_dimacs()).map_err(out_err)?;
    Ok(0)
}

pub fn cmd_dot(args: &DotArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let d = as_dnf(&load(&args.input)?)?;
    let (ordering, g) = build_graph(&d, &parse_order(&args.order)?)?;
    let text = match args.what {
        DotWhat::Trie => trie_to_dot(&g),
        DotWhat::Pstar => {
            let seqs = build_sequences(&d, &ordering);
            let s = seqs
                .iter()
                .find(|s| s.conj_id as usize == args.index)
                .ok_or_else(|| CliError::Usage(format!("no satisfiable conjunction {}", args.index)))?;
            pstar_to_dot(&build_p_star_graph(s))
        }
        DotWhat::Level => {
            let (lg, _) = build_layered(&g, 2_000_000);
            layered_level_to_dot(&g, &lg, args.index)
        }
    };
    write!(out, "{text}").map_err(out_err)?;
    Ok(0)
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    match &cli.command {
        Command::Solve(a) => cmd_solve(a, out),
        Command::Reduce(a) => cmd_reduce(a, out),
        Command::Oracle(a) => cmd_oracle(a, out),
        Command::Diff(a) => cmd_diff(a, out),
        Command::Gen(a) => cmd_gen(a, out),
        Command::Bench(a) => bench::cmd_bench(a, out),
        Command::Dot(a) => cmd_dot(a, out),
    }
}
