//! p-graphs and p*-graphs of a single variable sequence.
//!
//! Positions run `0..=k+1` with `0 = #` and `k+1 = $`. A span `(i, j)` with
//! `j ≥ i + 2` jumps over positions `i+1..j`, setting those variables false.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conjset::ConjId;
use crate::formula::{Assignment, Variable};
use crate::sequencing::{Label, VariableSequence};

pub type Span = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PStarGraph {
    pub conj_id: ConjId,
    /// Main-path labels, sentinels included.
    pub labels: Vec<Label>,
    /// Per position; sentinels are never optional.
    pub optional: Vec<bool>,
    pub spans: BTreeSet<Span>,
    num_vars: u32,
    removed: Vec<Variable>,
}

impl PStarGraph {
    pub fn num_nodes(&self) -> usize {
        self.labels.len()
    }

    pub fn main_edges(&self) -> impl Iterator<Item = Span> {
        (0..self.labels.len().saturating_sub(1)).map(|j| (j, j + 1))
    }

    pub fn last(&self) -> usize {
        self.labels.len() - 1
    }

    /// Whether every position strictly inside `(i, j)` is optional.
    pub fn interior_optional(&self, i: usize, j: usize) -> bool {
        (i + 1..j).all(|p| self.optional[p])
    }
}

/// Main path plus one base span `(j, j+2)` per optional slot at `j+1`.
pub fn build_p_graph(s: &VariableSequence) -> PStarGraph {
    let labels = s.main_path();
    let optional: Vec<bool> = (0..labels.len()).map(|p| s.is_optional_position(p)).collect();
    let spans = (1..labels.len() - 1)
        .filter(|&p| optional[p])
        .map(|p| (p - 1, p + 1))
        .collect();
    PStarGraph {
        conj_id: s.conj_id,
        labels,
        optional,
        spans,
        num_vars: (s.slots.len() + s.removed.len()) as u32,
        removed: s.removed.clone(),
    }
}

/// Closes the span set: `(i, j)` is present iff `j ≥ i + 2` and every
/// interior position is optional.
pub fn close_spans(g: &PStarGraph) -> PStarGraph {
    let mut spans = g.spans.clone();
    let last = g.last();
    for i in 0..last {
        let mut j = i + 2;
        while j <= last && g.optional[j - 1] {
            spans.insert((i, j));
            j += 1;
        }
    }
    PStarGraph { spans, ..g.clone() }
}

/// Closure computed literally: repeatedly add the union of any two spans
/// that overlap (the second starts strictly inside the first).
pub fn close_spans_fixpoint(g: &PStarGraph) -> PStarGraph {
    let mut spans = g.spans.clone();
    loop {
        let current: Vec<Span> = spans.iter().copied().collect();
        let mut added = false;
        for &(a, b) in &current {
            for &(c, d) in &current {
                if a < c && c < b && b < d && spans.insert((a, d)) {
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    PStarGraph { spans, ..g.clone() }
}

pub fn build_p_star_graph(s: &VariableSequence) -> PStarGraph {
    close_spans(&build_p_graph(s))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("more than {cap} paths")]
pub struct PathLimitExceeded {
    pub cap: usize,
}

/// Every `#`→`$` path as an assignment: traversed slots true, skipped slots
/// and negated variables false. Exponential; intended for tests.
pub fn enumerate_paths(g: &PStarGraph, cap: usize) -> Result<Vec<Assignment>, PathLimitExceeded> {
    let last = g.last();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); g.num_nodes()];
    for (i, j) in g.main_edges().chain(g.spans.iter().copied()) {
        succ[i].push(j);
    }
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, vec![0])];
    while let Some((pos, path)) = stack.pop() {
        if pos == last {
            if out.len() == cap {
                return Err(PathLimitExceeded { cap });
            }
            let mut a = Assignment::all(g.num_vars, false);
            for &p in &path {
                if let Some(v) = g.labels[p].variable() {
                    a.set(v, true);
                }
            }
            for &v in &g.removed {
                a.set(v, false);
            }
            out.push(a);
            continue;
        }
        for &next in succ[pos].iter().rev() {
            let mut p = path.clone();
            p.push(next);
            stack.push((next, p));
        }
    }
    Ok(out)
}
