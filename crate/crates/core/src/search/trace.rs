use serde::Serialize;

use crate::conjset::ConjId;

use super::reach::ReachableSet;
use crate::triegraph::TrieLikeGraph;

/// How the occurrences of a repeated node relate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RepeatCase {
    /// Producers pairwise on different tree paths.
    Case1,
    /// Producers pairwise on one tree path.
    Case2,
    /// Both kinds of pairs.
    Case3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Recursed,
    /// Fewer than two connected boundary nodes.
    NoBoundary,
    Pruned,
    /// The subgraph is not smaller than the graph it came from.
    NoProgress,
    DepthCap,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceRs {
    pub anchor: String,
    pub label: String,
    pub members: Vec<String>,
}

impl TraceRs {
    pub fn new(g: &TrieLikeGraph, rs: &ReachableSet) -> Self {
        TraceRs {
            anchor: g.name(rs.anchor),
            label: rs.label.to_string(),
            members: rs.members.iter().map(|&m| g.name(m)).collect(),
        }
    }
}

/// One repeated node that triggered (or was refused) a recursive call.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEvent {
    pub depth: u32,
    pub graph_nodes: usize,
    pub level: usize,
    pub node: String,
    pub case: RepeatCase,
    pub occurrences: usize,
    pub rs: Vec<TraceRs>,
    pub upbound: Vec<String>,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subgraph_nodes: Option<usize>,
    /// Distinct alive sets of size ≥ 2 seen inside the call, capped.
    pub found: Vec<Vec<ConjId>>,
    pub best_after: usize,
}
