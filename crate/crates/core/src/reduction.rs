//! The clause-pair reduction from 2-MAXSAT to maximum-conjunction DNF.
//!
//! Clause `i = (a ∨ b)` becomes `D_{i,1} = a ∧ x_i` and `D_{i,2} = b ∧ ¬x_i`,
//! where `x_i` is a fresh variable. At most one of the pair is true under any
//! assignment, and the clause is true iff one of them can be made true.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conjset::ConjId;
use crate::formula::{Assignment, ClauseId, CnfFormula, DnfFormula, FormulaError, Variable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error(transparent)]
    Invalid(#[from] FormulaError),
    #[error("conjunction id {0} is not produced by this reduction")]
    UnknownConjunction(ConjId),
}

/// Which member of a clause's conjunction pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    First,
    Second,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionMap {
    pub original_num_vars: u32,
    pub num_clauses: u32,
}

impl ReductionMap {
    pub fn aux_var_of_clause(&self, clause: ClauseId) -> Variable {
        Variable::new(self.original_num_vars + clause)
    }

    pub fn conj_pair_of_clause(&self, clause: ClauseId) -> (ConjId, ConjId) {
        (2 * clause - 1, 2 * clause)
    }

    pub fn clause_of_conj(&self, conj: ConjId) -> Result<(ClauseId, Side), ReductionError> {
        if conj == 0 || conj > 2 * self.num_clauses {
            return Err(ReductionError::UnknownConjunction(conj));
        }
        let side = if conj % 2 == 1 { Side::First } else { Side::Second };
        Ok((conj.div_ceil(2), side))
    }

    pub fn total_vars(&self) -> u32 {
        self.original_num_vars + self.num_clauses
    }
}

/// Reduces a strict 2-CNF formula. A unit clause `(c)` is treated as
/// `(c ∨ c)`, giving the pair `c ∧ x_i`, `c ∧ ¬x_i`.
pub fn reduce(f: &CnfFormula) -> Result<(DnfFormula, ReductionMap), ReductionError> {
    f.validate(true)?;
    let map = ReductionMap {
        original_num_vars: f.num_vars,
        num_clauses: f.clauses.len() as u32,
    };
    let mut conjunctions = Vec::with_capacity(2 * f.clauses.len());
    for clause in &f.clauses {
        let x = map.aux_var_of_clause(clause.id);
        let first = clause.literals[0];
        let second = *clause.literals.get(1).unwrap_or(&first);
        conjunctions.push(vec![first, x.positive()]);
        conjunctions.push(vec![second, x.negative()]);
    }
    Ok((DnfFormula::new(map.total_vars(), conjunctions), map))
}

/// Restricts an assignment over `V ∪ X` to the original variables.
pub fn lift_assignment(a: &Assignment, map: &ReductionMap) -> Assignment {
    a.restrict(map.original_num_vars)
}

/// Maps conjunction ids to the clauses they came from.
pub fn lift_subset<I>(conj_ids: I, map: &ReductionMap) -> Result<BTreeSet<ClauseId>, ReductionError>
where
    I: IntoIterator<Item = ConjId>,
{
    conj_ids
        .into_iter()
        .map(|id| map.clause_of_conj(id).map(|(clause, _)| clause))
        .collect()
}
