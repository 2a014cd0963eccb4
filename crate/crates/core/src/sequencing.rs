//! Variable frequencies, the global ordering, and wildcard variable sequences.
//!
//! A conjunction over `m` variables is rewritten as `#.s_1.….s_k.$` where
//! each slot is either a mandatory variable (occurs positively) or an
//! optional one written `(c,*)` (absent from the conjunction). Negated
//! variables are dropped from the sequence altogether.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conjset::ConjId;
use crate::formula::{Assignment, Conjunction, DnfFormula, Variable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequencingError {
    #[error("explicit ordering is not a permutation of 1..={0}")]
    NotPermutation(u32),
    #[error("conjunction {0} is contradictory and has no sequence")]
    Contradictory(ConjId),
}

/// A node label in p-graphs and tries: a variable or one of the sentinels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    Start,
    Var(Variable),
    End,
}

impl Label {
    pub fn variable(self) -> Option<Variable> {
        match self {
            Label::Var(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Start => write!(f, "#"),
            Label::Var(v) => write!(f, "{v}"),
            Label::End => write!(f, "$"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyTable {
    /// Indexed by variable slot (`index - 1`).
    pub count: Vec<u32>,
    /// Number of non-contradictory conjunctions.
    pub total: u32,
}

impl FrequencyTable {
    pub fn get(&self, v: Variable) -> u32 {
        self.count[v.slot()]
    }

    pub fn num_vars(&self) -> u32 {
        self.count.len() as u32
    }
}

/// Counts, per variable, the conjunctions where it occurs positively or not
/// at all. Negative occurrences count zero.
pub fn compute_frequencies(d: &DnfFormula) -> FrequencyTable {
    let m = d.num_vars as usize;
    let mut count = vec![0u32; m];
    let mut total = 0;
    let mut negated = vec![false; m];
    for conj in d.conjunctions.iter().filter(|c| !c.contradictory) {
        total += 1;
        negated.fill(false);
        for lit in conj.literals.iter().filter(|l| l.negated) {
            negated[lit.variable.slot()] = true;
        }
        for (c, &neg) in count.iter_mut().zip(&negated) {
            if !neg {
                *c += 1;
            }
        }
    }
    FrequencyTable { count, total }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum TieBreak {
    /// Descending frequency, ties by ascending variable index.
    #[default]
    ByIndex,
    /// Exactly this order, ignoring frequencies.
    Explicit(Vec<Variable>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalOrdering {
    order: Vec<Variable>,
    /// 1-based rank per variable slot.
    rank: Vec<u32>,
}

impl GlobalOrdering {
    pub fn from_order(order: Vec<Variable>) -> Result<Self, SequencingError> {
        let m = order.len() as u32;
        let mut rank = vec![0u32; order.len()];
        for (pos, v) in order.iter().enumerate() {
            let slot = v.slot();
            if slot >= rank.len() || rank[slot] != 0 {
                return Err(SequencingError::NotPermutation(m));
            }
            rank[slot] = pos as u32 + 1;
        }
        Ok(GlobalOrdering { order, rank })
    }

    pub fn identity(m: u32) -> Self {
        GlobalOrdering::from_order((1..=m).map(Variable::new).collect()).expect("identity")
    }

    pub fn rank(&self, v: Variable) -> u32 {
        self.rank[v.slot()]
    }

    pub fn order(&self) -> &[Variable] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

pub fn build_ordering(t: &FrequencyTable, tie_break: &TieBreak) -> Result<GlobalOrdering, SequencingError> {
    match tie_break {
        TieBreak::Explicit(order) => {
            if order.len() != t.count.len() {
                return Err(SequencingError::NotPermutation(t.num_vars()));
            }
            GlobalOrdering::from_order(order.clone())
        }
        TieBreak::ByIndex => {
            let mut order: Vec<Variable> = (1..=t.num_vars()).map(Variable::new).collect();
            // Stable sort keeps ascending index among equal counts.
            order.sort_by_key(|v| std::cmp::Reverse(t.get(*v)));
            GlobalOrdering::from_order(order)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SlotKind {
    Mandatory,
    Optional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Slot {
    pub variable: Variable,
    pub kind: SlotKind,
}

/// A conjunction's slots, without the `#`/`$` sentinels, which are implicit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableSequence {
    pub conj_id: ConjId,
    pub slots: Vec<Slot>,
    /// Variables occurring negated, hence absent from every slot.
    pub removed: Vec<Variable>,
}

impl VariableSequence {
    /// Labels of the main path, sentinels included.
    pub fn main_path(&self) -> Vec<Label> {
        let mut labels = Vec::with_capacity(self.slots.len() + 2);
        labels.push(Label::Start);
        labels.extend(self.slots.iter().map(|s| Label::Var(s.variable)));
        labels.push(Label::End);
        labels
    }

    /// Whether the node at main-path position `pos` is an optional slot.
    pub fn is_optional_position(&self, pos: usize) -> bool {
        pos >= 1
            && pos <= self.slots.len()
            && self.slots[pos - 1].kind == SlotKind::Optional
    }

    pub fn num_optional(&self) -> usize {
        self.slots.iter().filter(|s| s.kind == SlotKind::Optional).count()
    }

    /// Semantic reading of the sequence: mandatory slots true, removed
    /// variables false, optional slots free.
    pub fn accepts(&self, a: &Assignment) -> bool {
        self.slots
            .iter()
            .filter(|s| s.kind == SlotKind::Mandatory)
            .all(|s| a.value(s.variable))
            && self.removed.iter().all(|&v| !a.value(v))
    }
}

impl fmt::Display for VariableSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#")?;
        for slot in &self.slots {
            match slot.kind {
                SlotKind::Mandatory => write!(f, ".{}", slot.variable)?,
                SlotKind::Optional => write!(f, ".({},*)", slot.variable)?,
            }
        }
        write!(f, ".$")
    }
}

pub fn build_sequence(
    c: &Conjunction,
    o: &GlobalOrdering,
    m: u32,
) -> Result<VariableSequence, SequencingError> {
    if c.contradictory {
        return Err(SequencingError::Contradictory(c.id));
    }
    let mut kind: Vec<Option<SlotKind>> = vec![Some(SlotKind::Optional); m as usize];
    let mut removed = Vec::new();
    for lit in &c.literals {
        if lit.negated {
            kind[lit.variable.slot()] = None;
            removed.push(lit.variable);
        } else {
            kind[lit.variable.slot()] = Some(SlotKind::Mandatory);
        }
    }
    removed.sort();
    let slots = o
        .order()
        .iter()
        .filter_map(|&v| kind[v.slot()].map(|kind| Slot { variable: v, kind }))
        .collect();
    Ok(VariableSequence {
        conj_id: c.id,
        slots,
        removed,
    })
}

/// Sequences for every non-contradictory conjunction, in id order.
pub fn build_sequences(d: &DnfFormula, o: &GlobalOrdering) -> Vec<VariableSequence> {
    d.conjunctions
        .iter()
        .filter(|c| !c.contradictory)
        .map(|c| build_sequence(c, o, d.num_vars).expect("non-contradictory"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_dnf() -> DnfFormula {
        DnfFormula::from_dimacs_conjunctions(
            6,
            &[&[1, 4], &[2, -4], &[2, 5], &[-3, -5], &[3, 6], &[-1, -6]],
        )
    }

    fn example_order() -> GlobalOrdering {
        GlobalOrdering::from_order([2, 3, 1, 4, 5, 6].map(Variable::new).to_vec()).unwrap()
    }

    #[test]
    fn frequencies_match_table() {
        let t = compute_frequencies(&example_dnf());
        assert_eq!(t.count, vec![5, 6, 5, 5, 5, 5]);
        assert_eq!(t.total, 6);

        let d = DnfFormula::from_dimacs_conjunctions(2, &[&[1]]);
        assert_eq!(compute_frequencies(&d).count, vec![1, 1]);
        let d = DnfFormula::from_dimacs_conjunctions(1, &[&[-1]]);
        assert_eq!(compute_frequencies(&d).count, vec![0]);
        let d = DnfFormula::from_dimacs_conjunctions(1, &[&[1, -1]]);
        assert_eq!(compute_frequencies(&d).total, 0);
    }

    #[test]
    fn ordering_policies() {
        let t = compute_frequencies(&example_dnf());
        let o = build_ordering(&t, &TieBreak::ByIndex).unwrap();
        assert_eq!(o.order(), [2, 1, 3, 4, 5, 6].map(Variable::new));
        let explicit = TieBreak::Explicit([2, 3, 1, 4, 5, 6].map(Variable::new).to_vec());
        assert_eq!(build_ordering(&t, &explicit).unwrap(), example_order());

        let flat = FrequencyTable { count: vec![1, 1, 1], total: 1 };
        assert_eq!(build_ordering(&flat, &TieBreak::ByIndex).unwrap(), GlobalOrdering::identity(3));

        let bad = TieBreak::Explicit([1, 1, 2, 3, 4, 5].map(Variable::new).to_vec());
        assert_eq!(build_ordering(&t, &bad), Err(SequencingError::NotPermutation(6)));
        let short = TieBreak::Explicit([1, 2].map(Variable::new).to_vec());
        assert!(build_ordering(&t, &short).is_err());
    }

    #[test]
    fn sequences_match_table() {
        let d = example_dnf();
        let rows: Vec<String> = build_sequences(&d, &example_order())
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(
            rows,
            [
                "#.(c2,*).(c3,*).c1.c4.(c5,*).(c6,*).$",
                "#.c2.(c3,*).(c1,*).(c5,*).(c6,*).$",
                "#.c2.(c3,*).(c1,*).(c4,*).c5.(c6,*).$",
                "#.(c2,*).(c1,*).(c4,*).(c6,*).$",
                "#.(c2,*).c3.(c1,*).(c4,*).(c5,*).c6.$",
                "#.(c2,*).(c3,*).(c4,*).(c5,*).$",
            ]
        );
    }

    #[test]
    fn all_positive_is_all_mandatory() {
        let d = DnfFormula::from_dimacs_conjunctions(3, &[&[1, 2, 3]]);
        let s = build_sequence(&d.conjunctions[0], &GlobalOrdering::identity(3), 3).unwrap();
        assert_eq!(s.num_optional(), 0);
        assert_eq!(s.to_string(), "#.c1.c2.c3.$");
    }

    #[test]
    fn contradictory_has_no_sequence() {
        let d = DnfFormula::from_dimacs_conjunctions(1, &[&[1, -1]]);
        assert_eq!(
            build_sequence(&d.conjunctions[0], &GlobalOrdering::identity(1), 1),
            Err(SequencingError::Contradictory(1))
        );
    }
}
