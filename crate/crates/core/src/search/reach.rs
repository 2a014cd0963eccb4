//! Reachable sets through spans and the upper boundary they induce.

use serde::Serialize;

use crate::sequencing::Label;
use crate::triegraph::{NodeId, TrieLikeGraph};

/// `RS_u[c]`: nodes labelled `c` below the repeated node `v` that the anchor
/// `u` reaches in one step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReachableSet {
    pub anchor: NodeId,
    pub label: Label,
    pub members: Vec<NodeId>,
}

/// Reachable sets of `v` from one anchor on the tree path root→`v`.
///
/// Targets are span ends in the strict subtree of `v`; for `u = v` the tree
/// children of `v` count too. Sets with fewer than two members are dropped.
pub fn compute_rs(g: &TrieLikeGraph, v: NodeId, u: NodeId) -> Vec<ReachableSet> {
    let below = g.subtree(v);
    let mut targets: Vec<NodeId> = g
        .spans_from(u)
        .map(|s| s.to)
        .filter(|&t| t != v && below.contains(&t))
        .collect();
    if u == v {
        targets.extend_from_slice(&g.node(v).children);
    }
    targets.sort_unstable();
    targets.dedup();

    let mut sets: Vec<ReachableSet> = Vec::new();
    for t in targets {
        let label = g.label(t);
        match sets.iter_mut().find(|s| s.label == label) {
            Some(s) => s.members.push(t),
            None => sets.push(ReachableSet {
                anchor: u,
                label,
                members: vec![t],
            }),
        }
    }
    sets.retain(|s| s.members.len() >= 2);
    sets
}

/// Reachable sets for every anchor from the root down to `v` inclusive.
pub fn compute_rs_all(g: &TrieLikeGraph, v: NodeId) -> Vec<ReachableSet> {
    g.tree_path(v)
        .into_iter()
        .flat_map(|u| compute_rs(g, v, u))
        .collect()
}

/// The RS members with no proper ancestor among the RS members, by id.
/// The result is pairwise ancestor-incomparable.
pub fn compute_upbound(rs_sets: &[ReachableSet], g: &TrieLikeGraph) -> Vec<NodeId> {
    let mut all: Vec<NodeId> = rs_sets.iter().flat_map(|s| s.members.iter().copied()).collect();
    all.sort_unstable();
    all.dedup();
    all.iter()
        .copied()
        .filter(|&w| !all.iter().any(|&x| g.is_ancestor(x, w)))
        .collect()
}
