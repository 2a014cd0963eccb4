//! CNF/DNF formulas, truth assignments, and DIMACS-style parsing.
//!
//! Conventions used throughout the crate: `n` is the number of clauses (or
//! conjunctions), `m` the number of variables. Variables are 1-based.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conjset::ConjId;

pub type ClauseId = u32;

/// A propositional variable, indexed from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Variable(u32);

impl Variable {
    /// # Panics
    ///
    /// If `index` is zero.
    pub fn new(index: u32) -> Self {
        assert!(index >= 1, "variables are 1-based");
        Variable(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }

    /// Zero-based position, for indexing into per-variable vectors.
    pub fn slot(self) -> usize {
        (self.0 - 1) as usize
    }

    pub fn positive(self) -> Literal {
        Literal::new(self, false)
    }

    pub fn negative(self) -> Literal {
        Literal::new(self, true)
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub variable: Variable,
    pub negated: bool,
}

impl Literal {
    pub fn new(variable: Variable, negated: bool) -> Self {
        Literal { variable, negated }
    }

    /// Builds a literal from a non-zero DIMACS integer.
    pub fn from_dimacs(value: i64) -> Option<Self> {
        if value == 0 || value.unsigned_abs() > u32::MAX as u64 {
            return None;
        }
        Some(Literal::new(
            Variable(value.unsigned_abs() as u32),
            value < 0,
        ))
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.variable.index() as i64;
        if self.negated {
            -v
        } else {
            v
        }
    }

    pub fn negate(self) -> Self {
        Literal::new(self.variable, !self.negated)
    }

    pub fn eval(self, a: &Assignment) -> bool {
        a.value(self.variable) != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "¬{}", self.variable)
        } else {
            write!(f, "{}", self.variable)
        }
    }
}

/// A disjunction of literals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub id: ClauseId,
    pub literals: Vec<Literal>,
}

impl Clause {
    pub fn is_satisfied(&self, a: &Assignment) -> bool {
        self.literals.iter().any(|l| l.eval(a))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfFormula {
    pub num_vars: u32,
    pub clauses: Vec<Clause>,
}

impl CnfFormula {
    /// Builds a formula from literal lists, numbering clauses 1..n.
    ///
    /// Duplicate literals are removed; validity of the clause shape is not
    /// checked here (see [`CnfFormula::validate`]).
    pub fn new(num_vars: u32, clauses: Vec<Vec<Literal>>) -> Self {
        let clauses = clauses
            .into_iter()
            .enumerate()
            .map(|(i, lits)| Clause {
                id: (i + 1) as ClauseId,
                literals: dedup_literals(lits),
            })
            .collect();
        CnfFormula { num_vars, clauses }
    }

    /// Convenience constructor from DIMACS-style signed integers.
    ///
    /// # Panics
    ///
    /// If any literal is zero.
    pub fn from_dimacs_clauses(num_vars: u32, clauses: &[&[i64]]) -> Self {
        let clauses = clauses
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&v| Literal::from_dimacs(v).expect("non-zero literal"))
                    .collect()
            })
            .collect();
        CnfFormula::new(num_vars, clauses)
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// Checks ids, variable ranges and clause lengths. With `strict`, clauses
    /// must hold one or two literals.
    pub fn validate(&self, strict: bool) -> Result<(), FormulaError> {
        for (i, clause) in self.clauses.iter().enumerate() {
            if clause.id as usize != i + 1 {
                return Err(FormulaError::NonConsecutiveIds);
            }
            if clause.literals.is_empty() {
                return Err(FormulaError::EmptyClause(clause.id));
            }
            if strict && clause.literals.len() > 2 {
                return Err(FormulaError::ClauseTooLong {
                    id: clause.id,
                    len: clause.literals.len(),
                });
            }
            for lit in &clause.literals {
                if lit.variable.index() > self.num_vars {
                    return Err(FormulaError::VariableOutOfRange {
                        variable: lit.variable.index(),
                        num_vars: self.num_vars,
                    });
                }
            }
        }
        Ok(())
    }

    /// DIMACS serialization (`p cnf V N`).
    pub fn to_dimacs(&self) -> String {
        write_dimacs("cnf", self.num_vars, self.clauses.iter().map(|c| &c.literals[..]))
    }
}

/// A conjunction of literals. Conjunctions mentioning a variable in both
/// polarities are kept but flagged: they can never be satisfied.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conjunction {
    pub id: ConjId,
    pub literals: Vec<Literal>,
    pub contradictory: bool,
}

impl Conjunction {
    pub fn new(id: ConjId, literals: Vec<Literal>) -> Self {
        let literals = dedup_literals(literals);
        let contradictory = literals
            .iter()
            .any(|l| literals.contains(&l.negate()));
        Conjunction {
            id,
            literals,
            contradictory,
        }
    }

    pub fn is_satisfied(&self, a: &Assignment) -> bool {
        !self.contradictory && self.literals.iter().all(|l| l.eval(a))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DnfFormula {
    pub num_vars: u32,
    pub conjunctions: Vec<Conjunction>,
}

impl DnfFormula {
    pub fn new(num_vars: u32, conjunctions: Vec<Vec<Literal>>) -> Self {
        let conjunctions = conjunctions
            .into_iter()
            .enumerate()
            .map(|(i, lits)| Conjunction::new((i + 1) as ConjId, lits))
            .collect();
        DnfFormula {
            num_vars,
            conjunctions,
        }
    }

    /// # Panics
    ///
    /// If any literal is zero.
    pub fn from_dimacs_conjunctions(num_vars: u32, conjunctions: &[&[i64]]) -> Self {
        let conjunctions = conjunctions
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&v| Literal::from_dimacs(v).expect("non-zero literal"))
                    .collect()
            })
            .collect();
        DnfFormula::new(num_vars, conjunctions)
    }

    pub fn num_conjunctions(&self) -> usize {
        self.conjunctions.len()
    }

    pub fn conjunction(&self, id: ConjId) -> Option<&Conjunction> {
        id.checked_sub(1)
            .and_then(|i| self.conjunctions.get(i as usize))
    }

    /// DIMACS-style serialization (`p dnf V N`).
    pub fn to_dimacs(&self) -> String {
        write_dimacs(
            "dnf",
            self.num_vars,
            self.conjunctions.iter().map(|c| &c.literals[..]),
        )
    }
}

/// A total truth assignment over variables `1..=num_vars`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn all(num_vars: u32, value: bool) -> Self {
        Assignment {
            values: vec![value; num_vars as usize],
        }
    }

    pub fn from_values(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    /// Every listed variable true, every other variable false.
    pub fn from_true_vars<I: IntoIterator<Item = Variable>>(num_vars: u32, vars: I) -> Self {
        let mut a = Assignment::all(num_vars, false);
        for v in vars {
            a.set(v, true);
        }
        a
    }

    /// Decodes the `index`-th assignment in lexicographic order, with
    /// variable 1 as the most significant position and false < true.
    pub fn from_lex_index(num_vars: u32, index: u64) -> Self {
        let m = num_vars as usize;
        let values = (0..m).map(|i| (index >> (m - 1 - i)) & 1 == 1).collect();
        Assignment { values }
    }

    pub fn num_vars(&self) -> u32 {
        self.values.len() as u32
    }

    /// Variables outside the assignment's range read as false.
    pub fn value(&self, v: Variable) -> bool {
        self.values.get(v.slot()).copied().unwrap_or(false)
    }

    pub fn set(&mut self, v: Variable, value: bool) {
        let slot = v.slot();
        if slot >= self.values.len() {
            self.values.resize(slot + 1, false);
        }
        self.values[slot] = value;
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn true_vars(&self) -> impl Iterator<Item = Variable> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| Variable((i + 1) as u32))
    }

    /// The prefix over variables `1..=num_vars`.
    pub fn restrict(&self, num_vars: u32) -> Assignment {
        let mut values = self.values.clone();
        values.resize(num_vars as usize, false);
        Assignment { values }
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &b) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", u8::from(b))?;
        }
        Ok(())
    }
}

pub fn count_satisfied_clauses(f: &CnfFormula, a: &Assignment) -> usize {
    f.clauses.iter().filter(|c| c.is_satisfied(a)).count()
}

pub fn count_satisfied_conjunctions(d: &DnfFormula, a: &Assignment) -> usize {
    d.conjunctions.iter().filter(|c| c.is_satisfied(a)).count()
}

pub fn satisfied_clause_ids(f: &CnfFormula, a: &Assignment) -> Vec<ClauseId> {
    f.clauses
        .iter()
        .filter(|c| c.is_satisfied(a))
        .map(|c| c.id)
        .collect()
}

pub fn satisfied_conjunction_ids(d: &DnfFormula, a: &Assignment) -> Vec<ConjId> {
    d.conjunctions
        .iter()
        .filter(|c| c.is_satisfied(a))
        .map(|c| c.id)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("clause ids are not 1..n")]
    NonConsecutiveIds,
    #[error("clause {0} is empty")]
    EmptyClause(ClauseId),
    #[error("clause {id} has {len} literals; at most 2 are allowed")]
    ClauseTooLong { id: ClauseId, len: usize },
    #[error("variable {variable} exceeds the declared count {num_vars}")]
    VariableOutOfRange { variable: u32, num_vars: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: malformed problem line: {reason}")]
    MalformedHeader { line: usize, reason: String },
    #[error("missing problem line `p {kind} <vars> <count>`")]
    MissingHeader { kind: &'static str },
    #[error("line {line}: invalid token `{token}`")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: literal {literal} is out of range 1..={num_vars}")]
    LiteralOutOfRange {
        line: usize,
        literal: i64,
        num_vars: u32,
    },
    #[error("line {line}: empty clause")]
    EmptyClause { line: usize },
    #[error("line {line}: clause has {len} literals; at most 2 are allowed in strict mode")]
    ClauseTooLong { line: usize, len: usize },
    #[error("line {line}: last {kind} is not terminated by 0")]
    Unterminated { line: usize, kind: &'static str },
    #[error("header declares {declared} {kind}s but {found} were read")]
    CountMismatch {
        kind: &'static str,
        declared: usize,
        found: usize,
    },
}

impl ParseError {
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::MalformedHeader { line, .. }
            | ParseError::InvalidToken { line, .. }
            | ParseError::LiteralOutOfRange { line, .. }
            | ParseError::EmptyClause { line }
            | ParseError::ClauseTooLong { line, .. }
            | ParseError::Unterminated { line, .. } => Some(*line),
            ParseError::MissingHeader { .. } | ParseError::CountMismatch { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParseMode {
    /// At most two literals per clause.
    #[default]
    Strict,
    Permissive,
}

/// Parses DIMACS CNF text.
pub fn parse_cnf(text: &str, mode: ParseMode) -> Result<CnfFormula, ParseError> {
    let (num_vars, rows) = parse_rows(text, "cnf")?;
    let mut clauses = Vec::with_capacity(rows.len());
    for (line, lits) in rows {
        let lits = dedup_literals(lits);
        if mode == ParseMode::Strict && lits.len() > 2 {
            return Err(ParseError::ClauseTooLong {
                line,
                len: lits.len(),
            });
        }
        clauses.push(lits);
    }
    Ok(CnfFormula::new(num_vars, clauses))
}

/// Parses the `p dnf V N` format: one 0-terminated literal list per
/// conjunction. Contradictory conjunctions are flagged, not rejected.
pub fn parse_dnf(text: &str) -> Result<DnfFormula, ParseError> {
    let (num_vars, rows) = parse_rows(text, "dnf")?;
    Ok(DnfFormula::new(
        num_vars,
        rows.into_iter().map(|(_, lits)| lits).collect(),
    ))
}

type Row = (usize, Vec<Literal>);

fn parse_rows(text: &str, kind: &'static str) -> Result<(u32, Vec<Row>), ParseError> {
    let mut header: Option<(u32, usize)> = None;
    let mut rows = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut current_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(ParseError::MalformedHeader {
                    line,
                    reason: "duplicate problem line".into(),
                });
            }
            header = Some(parse_header(trimmed, kind, line)?);
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(ParseError::MissingHeader { kind });
        };
        for token in trimmed.split_whitespace() {
            let value: i64 = token.parse().map_err(|_| ParseError::InvalidToken {
                line,
                token: token.to_string(),
            })?;
            if value == 0 {
                if current.is_empty() {
                    return Err(ParseError::EmptyClause { line });
                }
                rows.push((line, std::mem::take(&mut current)));
                continue;
            }
            let lit = Literal::from_dimacs(value)
                .filter(|l| l.variable.index() <= num_vars)
                .ok_or(ParseError::LiteralOutOfRange {
                    line,
                    literal: value,
                    num_vars,
                })?;
            if current.is_empty() {
                current_line = line;
            }
            current.push(lit);
        }
    }

    let Some((num_vars, declared)) = header else {
        return Err(ParseError::MissingHeader { kind });
    };
    if !current.is_empty() {
        return Err(ParseError::Unterminated {
            line: current_line,
            kind: if kind == "cnf" { "clause" } else { "conjunction" },
        });
    }
    if rows.len() != declared {
        return Err(ParseError::CountMismatch {
            kind: if kind == "cnf" { "clause" } else { "conjunction" },
            declared,
            found: rows.len(),
        });
    }
    Ok((num_vars, rows))
}

fn parse_header(text: &str, kind: &str, line: usize) -> Result<(u32, usize), ParseError> {
    let malformed = |reason: &str| ParseError::MalformedHeader {
        line,
        reason: reason.to_string(),
    };
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != 4 || fields[0] != "p" {
        return Err(malformed("expected `p <format> <vars> <count>`"));
    }
    if fields[1] != kind {
        return Err(malformed(&format!(
            "expected format `{kind}`, found `{}`",
            fields[1]
        )));
    }
    let vars = fields[2]
        .parse::<u32>()
        .map_err(|_| malformed("variable count is not a non-negative integer"))?;
    let count = fields[3]
        .parse::<usize>()
        .map_err(|_| malformed("clause count is not a non-negative integer"))?;
    Ok((vars, count))
}

fn dedup_literals(lits: Vec<Literal>) -> Vec<Literal> {
    let mut out: Vec<Literal> = Vec::with_capacity(lits.len());
    for l in lits {
        if !out.contains(&l) {
            out.push(l);
        }
    }
    out
}

fn write_dimacs<'a>(
    kind: &str,
    num_vars: u32,
    rows: impl ExactSizeIterator<Item = &'a [Literal]>,
) -> String {
    let mut out = format!("p {kind} {num_vars} {}\n", rows.len());
    for row in rows {
        for lit in row {
            out.push_str(&lit.to_dimacs().to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE_CNF: &str = "p cnf 3 3\n1 2 0\n2 -3 0\n3 -1 0\n";
    const EXAMPLE_DNF: &str = "p dnf 6 6\n1 4 0\n2 -4 0\n2 5 0\n-3 -5 0\n3 6 0\n-1 -6 0\n";

    fn lit(v: i64) -> Literal {
        Literal::from_dimacs(v).unwrap()
    }

    #[test]
    fn parses_worked_cnf_example() {
        let f = parse_cnf(EXAMPLE_CNF, ParseMode::Strict).unwrap();
        assert_eq!(f.num_vars, 3);
        let lits: Vec<Vec<i64>> = f
            .clauses
            .iter()
            .map(|c| c.literals.iter().map(|l| l.to_dimacs()).collect())
            .collect();
        assert_eq!(lits, vec![vec![1, 2], vec![2, -3], vec![3, -1]]);
        assert_eq!(f.clauses[2].id, 3);
    }

    #[test]
    fn parses_single_unit_clause() {
        let f = parse_cnf("p cnf 1 1\n1 0\n", ParseMode::Strict).unwrap();
        assert_eq!(f.clauses.len(), 1);
        assert_eq!(f.clauses[0].literals, vec![lit(1)]);
    }

    #[test]
    fn rejects_out_of_range_literal() {
        let err = parse_cnf("p cnf 2 1\n1 2 3 0\n", ParseMode::Strict).unwrap_err();
        assert_eq!(
            err,
            ParseError::LiteralOutOfRange {
                line: 2,
                literal: 3,
                num_vars: 2
            }
        );
    }

    #[test]
    fn strict_mode_rejects_long_clauses() {
        let text = "p cnf 3 1\n1 2 3 0\n";
        assert!(matches!(
            parse_cnf(text, ParseMode::Strict),
            Err(ParseError::ClauseTooLong { line: 2, len: 3 })
        ));
        let f = parse_cnf(text, ParseMode::Permissive).unwrap();
        assert_eq!(f.clauses[0].literals.len(), 3);
    }

    #[test]
    fn reports_line_numbers_for_errors() {
        let err = parse_cnf("c comment\np cnf 2 2\n1 2 0\n0\n", ParseMode::Strict).unwrap_err();
        assert_eq!(err, ParseError::EmptyClause { line: 4 });
        assert_eq!(err.line(), Some(4));

        let err = parse_cnf("p cnf x 2\n", ParseMode::Strict).unwrap_err();
        assert!(matches!(err, ParseError::MalformedHeader { line: 1, .. }));

        let err = parse_cnf("p cnf 2 1\n1 two 0\n", ParseMode::Strict).unwrap_err();
        assert!(matches!(err, ParseError::InvalidToken { line: 2, .. }));
    }

    #[test]
    fn missing_header_and_count_mismatch() {
        assert!(matches!(
            parse_cnf("1 2 0\n", ParseMode::Strict),
            Err(ParseError::MissingHeader { .. })
        ));
        assert!(matches!(
            parse_cnf("p cnf 2 2\n1 2 0\n", ParseMode::Strict),
            Err(ParseError::CountMismatch { declared: 2, found: 1, .. })
        ));
        assert!(matches!(
            parse_cnf("p cnf 2 1\n1 2\n", ParseMode::Strict),
            Err(ParseError::Unterminated { line: 2, .. })
        ));
    }

    #[test]
    fn clauses_may_span_lines_and_duplicates_collapse() {
        let f = parse_cnf("p cnf 2 2\n1\n1 0 2\n-2 0\n", ParseMode::Strict).unwrap();
        assert_eq!(f.clauses[0].literals, vec![lit(1)]);
        assert_eq!(f.clauses[1].literals, vec![lit(2), lit(-2)]);
    }

    #[test]
    fn parses_worked_dnf_example() {
        let d = parse_dnf(EXAMPLE_DNF).unwrap();
        assert_eq!(d.num_conjunctions(), 6);
        assert_eq!(d.conjunctions[1].literals, vec![lit(2), lit(-4)]);
        assert!(d.conjunctions.iter().all(|c| !c.contradictory));
    }

    #[test]
    fn dnf_flags_contradictions() {
        let d = parse_dnf("p dnf 1 1\n1 -1 0\n").unwrap();
        assert!(d.conjunctions[0].contradictory);
        assert!(!d.conjunctions[0].is_satisfied(&Assignment::all(1, true)));
        assert!(!d.conjunctions[0].is_satisfied(&Assignment::all(1, false)));

        let d = parse_dnf("p dnf 2 1\n1 0\n").unwrap();
        assert_eq!(d.conjunctions[0].literals, vec![lit(1)]);
        assert_eq!(d.num_vars, 2);
    }

    #[test]
    fn counts_satisfied_clauses() {
        let f = parse_cnf(EXAMPLE_CNF, ParseMode::Strict).unwrap();
        assert_eq!(count_satisfied_clauses(&f, &Assignment::all(3, true)), 3);
        assert_eq!(count_satisfied_clauses(&f, &Assignment::all(3, false)), 2);
        let empty = CnfFormula::new(3, vec![]);
        assert_eq!(count_satisfied_clauses(&empty, &Assignment::all(3, true)), 0);
    }

    #[test]
    fn counts_satisfied_conjunctions() {
        let d = parse_dnf(EXAMPLE_DNF).unwrap();
        let all_true = Assignment::all(6, true);
        assert_eq!(count_satisfied_conjunctions(&d, &all_true), 3);
        assert_eq!(satisfied_conjunction_ids(&d, &all_true), vec![1, 3, 5]);
        let a = Assignment::from_true_vars(6, [Variable::new(2), Variable::new(4)]);
        assert_eq!(satisfied_conjunction_ids(&d, &a), vec![4, 6]);
    }

    #[test]
    fn dimacs_output_reparses() {
        let f = parse_cnf(EXAMPLE_CNF, ParseMode::Strict).unwrap();
        assert_eq!(f.to_dimacs(), EXAMPLE_CNF);
        let d = parse_dnf(EXAMPLE_DNF).unwrap();
        assert_eq!(parse_dnf(&d.to_dimacs()).unwrap(), d);
    }

    #[test]
    fn lex_index_orders_variable_one_first() {
        assert_eq!(Assignment::from_lex_index(3, 0).values(), &[false, false, false]);
        assert_eq!(Assignment::from_lex_index(3, 1).values(), &[false, false, true]);
        assert_eq!(Assignment::from_lex_index(3, 4).values(), &[true, false, false]);
        assert_eq!(Assignment::from_lex_index(3, 4).to_string(), "1 0 0");
    }

    #[test]
    fn validate_catches_bad_shapes() {
        let f = CnfFormula::from_dimacs_clauses(2, &[&[1, 2, -1]]);
        assert_eq!(
            f.validate(true),
            Err(FormulaError::ClauseTooLong { id: 1, len: 3 })
        );
        assert!(f.validate(false).is_ok());
        let f = CnfFormula::from_dimacs_clauses(1, &[&[2]]);
        assert!(matches!(
            f.validate(false),
            Err(FormulaError::VariableOutOfRange { .. })
        ));
    }
}
