//! Search for a largest simultaneously satisfiable set of conjunctions.
//!
//! [`Algorithm::Basic`] builds the whole layered graph and takes the best
//! occurrence; it is exact but may blow up. [`Algorithm::Improved`] merges
//! repeated nodes level by level and recurses on upper-boundary subgraphs.
//! Every candidate either algorithm reports is sound by construction, and
//! the final answer is re-evaluated against the formula before returning.

pub mod improved;
pub mod layered;
pub mod reach;
pub mod recursive;
pub mod trace;

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conjset::{ConjId, ConjSet};
use crate::formula::{Assignment, ClauseId, CnfFormula, DnfFormula};
use crate::reduction::{lift_assignment, lift_subset, reduce, ReductionError};
use crate::sequencing::TieBreak;
use crate::triegraph::{build_graph, TrieError, TrieLikeGraph};

pub use layered::{
    assignment_condition, build_layered, extract_assignment, find_subset, Candidate, LayerGroup,
    LayeredGraph, Occurrence, PathEdge,
};
pub use reach::{compute_rs, compute_rs_all, compute_upbound, ReachableSet};
pub use recursive::{build_recursive_graph, RecursiveGraph};
pub use trace::{Outcome, RepeatCase, TraceEvent};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Basic,
    #[default]
    Improved,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub algorithm: Algorithm,
    pub tie_break: TieBreak,
    /// Skip recursive calls over fewer subgraphs than the best size so far.
    pub prune: bool,
    /// Drop a lower Case-2 occurrence whose group has no other member.
    pub case2_check: bool,
    /// Recursion depth cap; defaults to the formula's variable count.
    pub max_depth: Option<u32>,
    /// Cap on layered-graph occurrences created across all calls.
    pub work_budget: u64,
    pub trace: bool,
    /// Re-evaluate every occurrence against the formula, not only the answer.
    pub check_candidates: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            algorithm: Algorithm::Improved,
            tie_break: TieBreak::ByIndex,
            prune: true,
            case2_check: true,
            max_depth: None,
            work_budget: 2_000_000,
            trace: false,
            check_candidates: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub trie_nodes: usize,
    pub span_edges: usize,
    pub levels_built: usize,
    pub recursive_calls: u64,
    pub merges_case1: u64,
    pub merges_case2: u64,
    pub merges_case3: u64,
    pub pruned_calls: u64,
    pub skipped_no_progress: u64,
    pub depth_cap_hits: u64,
    pub max_depth_reached: u32,
    pub work: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult {
    pub best_size: usize,
    pub best_conj_ids: Vec<ConjId>,
    pub best_assignment: Assignment,
    /// A depth cap or the work budget cut the search short.
    pub truncated: bool,
    pub stats: SearchStats,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceEvent>,
}

/// Clause-level answer for a 2-CNF instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CnfSolveResult {
    /// Clauses covered by the best conjunction set.
    pub best_size: usize,
    pub satisfied_clause_ids: Vec<ClauseId>,
    /// Clauses true under the lifted assignment (at least `best_size`).
    pub clauses_satisfied: usize,
    pub assignment: Assignment,
    pub dnf: SolveResult,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Graph(#[from] TrieError),
    #[error("soundness violation: {0}")]
    Soundness(String),
}

const FOUND_CAP: usize = 256;

pub(crate) struct Ctx<'a> {
    opts: &'a SearchOptions,
    dnf: &'a DnfFormula,
    best: Option<Candidate>,
    stats: SearchStats,
    trace: Vec<TraceEvent>,
    found_stack: Vec<Vec<ConjSet>>,
    max_depth: u32,
    truncated: bool,
    violations: Vec<String>,
}

impl<'a> Ctx<'a> {
    fn new(opts: &'a SearchOptions, dnf: &'a DnfFormula) -> Self {
        Ctx {
            opts,
            dnf,
            best: None,
            stats: SearchStats::default(),
            trace: Vec::new(),
            found_stack: Vec::new(),
            max_depth: opts.max_depth.unwrap_or(dnf.num_vars),
            truncated: false,
            violations: Vec::new(),
        }
    }

    fn best_size(&self) -> usize {
        self.best.as_ref().map_or(0, |c| c.conj_ids.len())
    }

    fn budget_exhausted(&self) -> bool {
        self.stats.work >= self.opts.work_budget
    }

    fn offer(&mut self, g: &TrieLikeGraph, lg: &LayeredGraph, occ: usize) {
        let alive = &lg.occurrences[occ].alive;
        if self.opts.check_candidates {
            let a = lg.assignment_of(g, occ);
            self.check(alive, &a);
        }
        if alive.len() >= 2 {
            for frame in &mut self.found_stack {
                if frame.len() < FOUND_CAP && !frame.contains(alive) {
                    frame.push(alive.clone());
                }
            }
        }
        if alive.len() > self.best_size() {
            self.best = Some(Candidate {
                conj_ids: alive.clone(),
                assignment: lg.assignment_of(g, occ),
            });
        }
    }

    fn offer_candidate(&mut self, c: Candidate) {
        if self.opts.check_candidates {
            self.check(&c.conj_ids, &c.assignment);
        }
        if c.conj_ids.len() > self.best_size() {
            self.best = Some(c);
        }
    }

    fn check(&mut self, ids: &ConjSet, a: &Assignment) {
        if let Some(bad) = unsatisfied(self.dnf, ids, a) {
            self.violations
                .push(format!("conjunction {bad} is false under candidate {ids} / {a}"));
        }
    }
}

fn unsatisfied(d: &DnfFormula, ids: &ConjSet, a: &Assignment) -> Option<ConjId> {
    ids.iter()
        .find(|&id| !d.conjunction(id).is_some_and(|c| c.is_satisfied(a)))
}

/// Runs the basic search on a prebuilt graph.
pub fn search_basic(g: &TrieLikeGraph, d: &DnfFormula, opts: &SearchOptions) -> Result<SolveResult, SolveError> {
    let mut ctx = Ctx::new(opts, d);
    let budget = usize::try_from(opts.work_budget).unwrap_or(usize::MAX);
    let (lg, truncated) = build_layered(g, budget);
    ctx.stats.work = lg.occurrences.len() as u64;
    ctx.stats.levels_built = lg.num_levels();
    ctx.truncated = truncated;
    for occ in 0..lg.occurrences.len() {
        ctx.offer(g, &lg, occ);
    }
    finish(ctx, g)
}

/// Runs the improved search on a prebuilt graph.
pub fn search_improved(g: &TrieLikeGraph, d: &DnfFormula, opts: &SearchOptions) -> Result<SolveResult, SolveError> {
    let mut ctx = Ctx::new(opts, d);
    ctx.found_stack.push(Vec::new());
    improved::search_graph(&mut ctx, g, 0);
    finish(ctx, g)
}

fn finish(ctx: Ctx, g: &TrieLikeGraph) -> Result<SolveResult, SolveError> {
    if let Some(v) = ctx.violations.first() {
        return Err(SolveError::Soundness(v.clone()));
    }
    let (ids, assignment) = match ctx.best {
        Some(c) => (c.conj_ids, c.assignment),
        None => (ConjSet::new(), Assignment::all(ctx.dnf.num_vars, false)),
    };
    if let Some(bad) = unsatisfied(ctx.dnf, &ids, &assignment) {
        return Err(SolveError::Soundness(format!(
            "conjunction {bad} is false under the returned assignment {assignment}"
        )));
    }
    let mut stats = ctx.stats;
    stats.trie_nodes = g.len();
    stats.span_edges = g.spans.len();
    Ok(SolveResult {
        best_size: ids.len(),
        best_conj_ids: ids.to_vec(),
        best_assignment: assignment,
        truncated: ctx.truncated,
        stats,
        trace: ctx.trace,
    })
}

/// Builds the graph for `d` and searches it.
pub fn solve_dnf(d: &DnfFormula, opts: &SearchOptions) -> Result<SolveResult, SolveError> {
    let start = Instant::now();
    let (_, g) = build_graph(d, &opts.tie_break)?;
    let mut result = match opts.algorithm {
        Algorithm::Basic => search_basic(&g, d, opts)?,
        Algorithm::Improved => search_improved(&g, d, opts)?,
    };
    result.stats.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    Ok(result)
}

/// Reduce, search, lift. The lifted assignment is re-checked against `f`.
pub fn solve(f: &CnfFormula, opts: &SearchOptions) -> Result<CnfSolveResult, SolveError> {
    let (d, map) = reduce(f)?;
    let dnf = solve_dnf(&d, opts)?;
    let assignment = lift_assignment(&dnf.best_assignment, &map);
    let clauses: Vec<ClauseId> = lift_subset(dnf.best_conj_ids.iter().copied(), &map)?
        .into_iter()
        .collect();
    if clauses.len() != dnf.best_size {
        return Err(SolveError::Soundness(format!(
            "{} conjunctions lift to {} clauses",
            dnf.best_size,
            clauses.len()
        )));
    }
    if let Some(&bad) = clauses
        .iter()
        .find(|&&id| !f.clauses[id as usize - 1].is_satisfied(&assignment))
    {
        return Err(SolveError::Soundness(format!(
            "clause {bad} is false under the lifted assignment {assignment}"
        )));
    }
    let clauses_satisfied = crate::formula::count_satisfied_clauses(f, &assignment);
    Ok(CnfSolveResult {
        best_size: clauses.len(),
        satisfied_clause_ids: clauses,
        clauses_satisfied,
        assignment,
        dnf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Variable;

    fn example_cnf() -> CnfFormula {
        CnfFormula::from_dimacs_clauses(3, &[&[1, 2], &[2, -3], &[3, -1]])
    }

    fn example_dnf() -> DnfFormula {
        DnfFormula::from_dimacs_conjunctions(
            6,
            &[&[1, 4], &[2, -4], &[2, 5], &[-3, -5], &[3, 6], &[-1, -6]],
        )
    }

    fn example_opts() -> SearchOptions {
        SearchOptions {
            tie_break: TieBreak::Explicit([2, 3, 1, 4, 5, 6].map(Variable::new).to_vec()),
            check_candidates: true,
            ..SearchOptions::default()
        }
    }

    #[test]
    fn worked_example_end_to_end() {
        for algorithm in [Algorithm::Basic, Algorithm::Improved] {
            let opts = SearchOptions {
                algorithm,
                check_candidates: true,
                ..SearchOptions::default()
            };
            let r = solve(&example_cnf(), &opts).unwrap();
            assert_eq!(r.best_size, 3);
            assert_eq!(r.satisfied_clause_ids, vec![1, 2, 3]);
            assert_eq!(r.assignment, Assignment::all(3, true));
            assert_eq!(r.dnf.best_conj_ids, vec![1, 3, 5]);
        }
    }

    #[test]
    fn example_dnf_with_example_ordering() {
        let r = solve_dnf(&example_dnf(), &example_opts()).unwrap();
        assert_eq!(r.best_conj_ids, vec![1, 3, 5]);
        assert_eq!(r.best_assignment, Assignment::all(6, true));
    }

    #[test]
    fn complementary_units() {
        let f = CnfFormula::from_dimacs_clauses(1, &[&[1], &[-1]]);
        let r = solve(&f, &SearchOptions::default()).unwrap();
        assert_eq!(r.best_size, 1);
    }

    #[test]
    fn single_conjunction_needs_no_recursion() {
        let d = DnfFormula::from_dimacs_conjunctions(3, &[&[1, -2]]);
        let r = solve_dnf(&d, &SearchOptions::default()).unwrap();
        assert_eq!(r.best_conj_ids, vec![1]);
        assert_eq!(r.stats.recursive_calls, 0);
    }

    #[test]
    fn empty_formula() {
        let r = solve(&CnfFormula::new(2, vec![]), &SearchOptions::default()).unwrap();
        assert_eq!(r.best_size, 0);
        assert_eq!(r.assignment, Assignment::all(2, false));
    }

    #[test]
    fn v2_recursion_finds_d3_d6() {
        let opts = SearchOptions {
            prune: false,
            trace: true,
            ..example_opts()
        };
        let r = solve_dnf(&example_dnf(), &opts).unwrap();
        let v2 = r
            .trace
            .iter()
            .find(|e| e.node == "v2" && e.depth == 0 && e.outcome == Outcome::Recursed)
            .expect("v2 recursion");
        assert_eq!(v2.upbound, ["v4", "v8", "v11"]);
        assert!(v2.found.contains(&vec![3, 6]), "{:?}", v2.found);
    }
}
