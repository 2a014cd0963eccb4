//! Exhaustive solvers, a seeded instance generator, and the differential
//! harness that compares the search against the exhaustive optimum.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{Assignment, CnfFormula, DnfFormula, Literal, Variable};
use crate::search::{solve, SearchOptions, SolveError};

pub const DEFAULT_VAR_CAP: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{vars} variables exceed the exhaustive cap of {cap}")]
    OverCap { vars: u32, cap: u32 },
    #[error("infeasible generator parameters: {0}")]
    Infeasible(String),
    #[error("invalid size range `{0}`")]
    BadRange(String),
}

/// Clause or conjunction as two bitmasks over the lexicographic index,
/// where variable 1 is the most significant bit.
struct Masks {
    pos: u64,
    neg: u64,
}

fn masks(lits: &[Literal], m: u32) -> Masks {
    let mut out = Masks { pos: 0, neg: 0 };
    for l in lits {
        let bit = 1u64 << (m - l.variable.index());
        if l.negated {
            out.neg |= bit;
        } else {
            out.pos |= bit;
        }
    }
    out
}

fn exhaustive_max(m: u32, cap: u32, score: impl Fn(u64) -> usize) -> Result<(usize, Assignment), OracleError> {
    if m > cap || m >= 64 {
        return Err(OracleError::OverCap { vars: m, cap });
    }
    let mut best = (0usize, 0u64);
    let mut first = true;
    for idx in 0..(1u64 << m) {
        let s = score(idx);
        if first || s > best.0 {
            best = (s, idx);
            first = false;
        }
    }
    Ok((best.0, Assignment::from_lex_index(m, best.1)))
}

/// Maximum number of satisfiable clauses and the lexicographically
/// smallest maximizing assignment.
pub fn oracle_maxsat(f: &CnfFormula, cap: u32) -> Result<(usize, Assignment), OracleError> {
    let m = f.num_vars;
    let cls: Vec<Masks> = f.clauses.iter().map(|c| masks(&c.literals, m)).collect();
    exhaustive_max(m, cap, |idx| {
        cls.iter()
            .filter(|c| idx & c.pos != 0 || !idx & c.neg != 0)
            .count()
    })
}

/// Maximum number of simultaneously true conjunctions.
pub fn oracle_dnf_max(d: &DnfFormula, cap: u32) -> Result<(usize, Assignment), OracleError> {
    let m = d.num_vars;
    let conj: Vec<Masks> = d
        .conjunctions
        .iter()
        .filter(|c| !c.contradictory)
        .map(|c| masks(&c.literals, m))
        .collect();
    exhaustive_max(m, cap, |idx| {
        conj.iter()
            .filter(|c| idx & c.pos == c.pos && idx & c.neg == 0)
            .count()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub num_vars: u32,
    pub num_clauses: u32,
    pub seed: u64,
    pub unit_fraction: f64,
}

/// A reproducible random 2-CNF: 2-clauses over distinct variables with
/// uniform polarity, and `round(unit_fraction · n)` unit clauses at random
/// positions.
pub fn gen_instance(p: &GenParams) -> Result<CnfFormula, OracleError> {
    if p.num_vars == 0 {
        return Err(OracleError::Infeasible("num_vars must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&p.unit_fraction) {
        return Err(OracleError::Infeasible("unit_fraction must lie in [0, 1]".into()));
    }
    let n = p.num_clauses as usize;
    let units = ((p.unit_fraction * n as f64).round() as usize).min(n);
    if p.num_vars == 1 && units < n {
        return Err(OracleError::Infeasible(
            "2-clauses over distinct variables need at least 2 variables".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut is_unit = vec![false; n];
    for i in sample(&mut rng, n, units) {
        is_unit[i] = true;
    }
    let lit = |rng: &mut ChaCha8Rng, v: u32| Literal::new(Variable::new(v), rng.gen_bool(0.5));
    let clauses = is_unit
        .iter()
        .map(|&unit| {
            if unit {
                let v = rng.gen_range(1..=p.num_vars);
                vec![lit(&mut rng, v)]
            } else {
                let pair = sample(&mut rng, p.num_vars as usize, 2);
                let (a, b) = (pair.index(0) as u32 + 1, pair.index(1) as u32 + 1);
                vec![lit(&mut rng, a), lit(&mut rng, b)]
            }
        })
        .collect();
    Ok(CnfFormula::new(p.num_vars, clauses))
}

/// An inclusive size range, written `5` or `1..8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeRange {
    pub min: u32,
    pub max: u32,
}

impl SizeRange {
    pub fn exactly(n: u32) -> Self {
        SizeRange { min: n, max: n }
    }

    fn pick(&self, rng: &mut ChaCha8Rng) -> u32 {
        rng.gen_range(self.min..=self.max)
    }
}

impl FromStr for SizeRange {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || OracleError::BadRange(s.to_string());
        let (min, max) = match s.split_once("..") {
            Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
            None => {
                let n = s.trim().parse().map_err(|_| bad())?;
                (n, n)
            }
        };
        if min > max {
            return Err(bad());
        }
        Ok(SizeRange { min, max })
    }
}

impl fmt::Display for SizeRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.min == self.max {
            write!(f, "{}", self.min)
        } else {
            write!(f, "{}..{}", self.min, self.max)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffParams {
    pub vars: SizeRange,
    pub clauses: SizeRange,
    pub unit_fraction: f64,
    pub seed: u64,
    pub count: usize,
    pub options: SearchOptions,
}

impl Default for DiffParams {
    fn default() -> Self {
        DiffParams {
            vars: SizeRange::exactly(5),
            clauses: SizeRange::exactly(6),
            unit_fraction: 0.1,
            seed: 7,
            count: 100,
            options: SearchOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Shortfall {
    pub index: usize,
    pub instance_seed: u64,
    pub solver_size: usize,
    pub oracle_size: usize,
    /// DIMACS text of the generated instance.
    pub instance: String,
    /// DIMACS text after shrinking; still a shortfall.
    pub minimized: String,
    pub minimized_solver_size: usize,
    pub minimized_oracle_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffReport {
    pub params: DiffParams,
    pub instances_run: usize,
    pub agreements: usize,
    pub agreement_rate: f64,
    /// Runs cut short by a depth cap or the work budget.
    pub truncated_runs: usize,
    pub shortfalls: Vec<Shortfall>,
    pub soundness_violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiffError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("soundness violation on instance {index}: {message}\n{instance}")]
    Soundness {
        index: usize,
        instance: String,
        message: String,
    },
}

/// Seed for the `k`-th instance of a run (splitmix64 finalizer).
pub fn instance_seed(seed: u64, k: usize) -> u64 {
    let mut z = seed.wrapping_add((k as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The generated instance for index `k` of a diff run.
pub fn diff_instance(p: &DiffParams, k: usize) -> Result<(u64, CnfFormula), OracleError> {
    let s = instance_seed(p.seed, k);
    let mut rng = ChaCha8Rng::seed_from_u64(s);
    let num_vars = p.vars.pick(&mut rng).max(2);
    let num_clauses = p.clauses.pick(&mut rng);
    let f = gen_instance(&GenParams {
        num_vars,
        num_clauses,
        seed: rng.gen(),
        unit_fraction: p.unit_fraction,
    })?;
    Ok((s, f))
}

/// Solver size and oracle optimum for one instance.
pub fn compare(f: &CnfFormula, opts: &SearchOptions) -> Result<(usize, usize, bool), DiffCaseError> {
    let r = solve(f, opts).map_err(DiffCaseError::Solve)?;
    let (opt, _) = oracle_maxsat(f, DEFAULT_VAR_CAP).map_err(DiffCaseError::Oracle)?;
    if r.best_size > opt {
        return Err(DiffCaseError::Solve(SolveError::Soundness(format!(
            "solver reports {} clauses but the optimum is {opt}",
            r.best_size
        ))));
    }
    Ok((r.best_size, opt, r.dnf.truncated))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiffCaseError {
    #[error(transparent)]
    Solve(SolveError),
    #[error(transparent)]
    Oracle(OracleError),
}

enum CaseOutcome {
    Agree { truncated: bool },
    Short { truncated: bool, shortfall: Shortfall },
    Violation(String),
}

fn run_case(p: &DiffParams, k: usize) -> Result<(CaseOutcome, String), OracleError> {
    let (seed, f) = diff_instance(p, k)?;
    let text = f.to_dimacs();
    let outcome = match compare(&f, &p.options) {
        Err(DiffCaseError::Oracle(e)) => return Err(e),
        Err(DiffCaseError::Solve(e)) => CaseOutcome::Violation(e.to_string()),
        Ok((s, o, truncated)) if s == o => CaseOutcome::Agree { truncated },
        Ok((s, o, truncated)) => match shrink(&f, &p.options) {
            Err(e) => CaseOutcome::Violation(e.to_string()),
            Ok(min) => match compare(&min, &p.options) {
                Ok((ms, mo, _)) => CaseOutcome::Short {
                    truncated,
                    shortfall: Shortfall {
                        index: k,
                        instance_seed: seed,
                        solver_size: s,
                        oracle_size: o,
                        instance: text.clone(),
                        minimized: min.to_dimacs(),
                        minimized_solver_size: ms,
                        minimized_oracle_size: mo,
                    },
                },
                Err(e) => CaseOutcome::Violation(e.to_string()),
            },
        },
    };
    Ok((outcome, text))
}

/// Runs `count` generated instances in parallel and tallies agreement with
/// the exhaustive optimum. Any soundness violation is an error.
pub fn run_diff(p: &DiffParams) -> Result<DiffReport, DiffError> {
    let cases: Vec<Result<(CaseOutcome, String), OracleError>> =
        (0..p.count).into_par_iter().map(|k| run_case(p, k)).collect();
    let mut report = DiffReport {
        params: p.clone(),
        instances_run: 0,
        agreements: 0,
        agreement_rate: 1.0,
        truncated_runs: 0,
        shortfalls: Vec::new(),
        soundness_violations: Vec::new(),
    };
    for (k, case) in cases.into_iter().enumerate() {
        let (outcome, text) = case?;
        report.instances_run += 1;
        match outcome {
            CaseOutcome::Agree { truncated } => {
                report.agreements += 1;
                report.truncated_runs += usize::from(truncated);
            }
            CaseOutcome::Short { truncated, shortfall } => {
                report.truncated_runs += usize::from(truncated);
                report.shortfalls.push(shortfall);
            }
            CaseOutcome::Violation(message) => {
                return Err(DiffError::Soundness {
                    index: k,
                    instance: text,
                    message,
                })
            }
        }
    }
    if report.instances_run > 0 {
        report.agreement_rate = report.agreements as f64 / report.instances_run as f64;
    }
    Ok(report)
}

/// Greedy shrinking that keeps `solver < optimum`: drop clauses, then drop
/// a variable's literals (a 2-clause loses the literal, a unit disappears),
/// then renumber away unused variables. Each accepted step makes the
/// instance strictly smaller, so this terminates.
pub fn shrink(f: &CnfFormula, opts: &SearchOptions) -> Result<CnfFormula, DiffCaseError> {
    let fails = |g: &CnfFormula| -> Result<bool, DiffCaseError> {
        let (s, o, _) = compare(g, opts)?;
        Ok(s < o)
    };
    let mut cur = f.clone();
    'outer: loop {
        for i in 0..cur.clauses.len() {
            let cand = without_clause(&cur, i);
            if fails(&cand)? {
                cur = cand;
                continue 'outer;
            }
        }
        for v in 1..=cur.num_vars {
            let cand = without_variable(&cur, Variable::new(v));
            if cand.clauses.iter().map(|c| c.literals.len()).sum::<usize>()
                < cur.clauses.iter().map(|c| c.literals.len()).sum::<usize>()
                && fails(&cand)?
            {
                cur = cand;
                continue 'outer;
            }
        }
        let cand = compact(&cur);
        if cand.num_vars < cur.num_vars && fails(&cand)? {
            cur = cand;
            continue 'outer;
        }
        return Ok(cur);
    }
}

fn rebuild(num_vars: u32, clauses: impl Iterator<Item = Vec<Literal>>) -> CnfFormula {
    CnfFormula::new(num_vars, clauses.filter(|c| !c.is_empty()).collect())
}

fn without_clause(f: &CnfFormula, i: usize) -> CnfFormula {
    rebuild(
        f.num_vars,
        f.clauses
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, c)| c.literals.clone()),
    )
}

fn without_variable(f: &CnfFormula, v: Variable) -> CnfFormula {
    rebuild(
        f.num_vars,
        f.clauses
            .iter()
            .map(|c| c.literals.iter().copied().filter(|l| l.variable != v).collect()),
    )
}

/// Renumbers variables so only used ones remain, keeping at least one.
fn compact(f: &CnfFormula) -> CnfFormula {
    let mut used = vec![false; f.num_vars as usize];
    for c in &f.clauses {
        for l in &c.literals {
            used[l.variable.slot()] = true;
        }
    }
    let mut new_index = vec![0u32; f.num_vars as usize];
    let mut next = 0;
    for (slot, &u) in used.iter().enumerate() {
        if u {
            next += 1;
            new_index[slot] = next;
        }
    }
    rebuild(
        next.max(1),
        f.clauses.iter().map(|c| {
            c.literals
                .iter()
                .map(|l| Literal::new(Variable::new(new_index[l.variable.slot()]), l.negated))
                .collect()
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::count_satisfied_clauses;

    fn example_cnf() -> CnfFormula {
        CnfFormula::from_dimacs_clauses(3, &[&[1, 2], &[2, -3], &[3, -1]])
    }

    #[test]
    fn oracle_values() {
        assert_eq!(oracle_maxsat(&example_cnf(), 24).unwrap().0, 3);
        let f = CnfFormula::from_dimacs_clauses(1, &[&[1], &[-1]]);
        assert_eq!(oracle_maxsat(&f, 24).unwrap().0, 1);
        let (opt, w) = oracle_maxsat(&CnfFormula::new(2, vec![]), 24).unwrap();
        assert_eq!(opt, 0);
        assert_eq!(w, Assignment::all(2, false));

        let d = DnfFormula::from_dimacs_conjunctions(
            6,
            &[&[1, 4], &[2, -4], &[2, 5], &[-3, -5], &[3, 6], &[-1, -6]],
        );
        assert_eq!(oracle_dnf_max(&d, 24).unwrap().0, 3);
        let d = DnfFormula::from_dimacs_conjunctions(1, &[&[1]]);
        assert_eq!(oracle_dnf_max(&d, 24).unwrap().0, 1);
        let d = DnfFormula::from_dimacs_conjunctions(1, &[&[1], &[-1]]);
        assert_eq!(oracle_dnf_max(&d, 24).unwrap().0, 1);
        let d = DnfFormula::from_dimacs_conjunctions(1, &[&[1, -1]]);
        assert_eq!(oracle_dnf_max(&d, 24).unwrap().0, 0);
    }

    #[test]
    fn witness_is_lexicographically_smallest() {
        // (c1 ∨ c2): maximizers are 01, 10, 11; smallest is 01.
        let f = CnfFormula::from_dimacs_clauses(2, &[&[1, 2]]);
        let (opt, w) = oracle_maxsat(&f, 24).unwrap();
        assert_eq!(opt, 1);
        assert_eq!(w.values(), &[false, true]);
        assert_eq!(count_satisfied_clauses(&f, &w), 1);
    }

    #[test]
    fn oracle_cap() {
        let f = CnfFormula::new(30, vec![]);
        assert_eq!(oracle_maxsat(&f, 24), Err(OracleError::OverCap { vars: 30, cap: 24 }));
    }

    #[test]
    fn generator_is_deterministic() {
        let p = GenParams {
            num_vars: 3,
            num_clauses: 3,
            seed: 1,
            unit_fraction: 0.0,
        };
        let a = gen_instance(&p).unwrap();
        assert_eq!(a, gen_instance(&p).unwrap());
        assert!(a.validate(true).is_ok());
        for c in &a.clauses {
            assert_eq!(c.literals.len(), 2);
            assert_ne!(c.literals[0].variable, c.literals[1].variable);
        }
        let units = gen_instance(&GenParams { unit_fraction: 1.0, num_vars: 1, ..p }).unwrap();
        assert!(units.clauses.iter().all(|c| c.literals.len() == 1));
    }

    #[test]
    fn generator_rejects_infeasible() {
        let p = GenParams {
            num_vars: 1,
            num_clauses: 2,
            seed: 0,
            unit_fraction: 0.0,
        };
        assert!(matches!(gen_instance(&p), Err(OracleError::Infeasible(_))));
        assert!(gen_instance(&GenParams { num_vars: 0, ..p }).is_err());
    }

    #[test]
    fn size_ranges_parse() {
        assert_eq!("5".parse::<SizeRange>().unwrap(), SizeRange::exactly(5));
        assert_eq!("1..8".parse::<SizeRange>().unwrap(), SizeRange { min: 1, max: 8 });
        assert!("8..1".parse::<SizeRange>().is_err());
        assert!("x".parse::<SizeRange>().is_err());
        assert_eq!(SizeRange { min: 1, max: 8 }.to_string(), "1..8");
    }

    #[test]
    fn empty_diff_run() {
        let p = DiffParams {
            count: 0,
            ..DiffParams::default()
        };
        let r = run_diff(&p).unwrap();
        assert_eq!(r.instances_run, 0);
        assert!(r.shortfalls.is_empty());
    }

    #[test]
    fn small_diff_run_partitions() {
        let p = DiffParams {
            count: 50,
            ..DiffParams::default()
        };
        let r = run_diff(&p).unwrap();
        assert_eq!(r.agreements + r.shortfalls.len(), 50);
        for s in &r.shortfalls {
            assert!(s.solver_size < s.oracle_size);
            assert!(s.minimized_solver_size < s.minimized_oracle_size);
        }
        assert_eq!(r, run_diff(&p).unwrap());
    }

    #[test]
    fn compact_renumbers() {
        let f = CnfFormula::from_dimacs_clauses(5, &[&[2, -5]]);
        let c = compact(&f);
        assert_eq!(c, CnfFormula::from_dimacs_clauses(2, &[&[1, -2]]));
    }
}
