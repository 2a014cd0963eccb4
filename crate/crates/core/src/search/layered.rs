//! The layered bottom-up view of a trie-like graph.
//!
//! Level 1 holds the `$` leaves. A group is a set of occurrences sharing a
//! label and the same label string below them. Level `k+1` holds the parents
//! (by tree edge or span) of every level-`k` group with at least two live
//! members, grouped by label. An occurrence's alive set is the ids that can
//! reach a leaf through it while every edge passes the assignment condition.

use std::collections::HashMap;

use serde::Serialize;

use crate::conjset::{ConjId, ConjSet};
use crate::formula::Assignment;
use crate::sequencing::Label;
use crate::triegraph::{NodeId, TrieLikeGraph};

pub type OccId = usize;
pub type GroupId = usize;

#[derive(Debug, Clone, Serialize)]
pub struct Occurrence {
    pub node: NodeId,
    pub alive: ConjSet,
    pub group: GroupId,
    /// Occurrences one level down that led here.
    pub producers: Vec<OccId>,
    /// Dropped by a merge; still a valid candidate, but never expanded.
    pub removed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LayerGroup {
    pub label: Label,
    pub level: usize,
    /// The group this one was expanded from.
    pub below: Option<GroupId>,
    pub members: Vec<OccId>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct LayeredGraph {
    pub occurrences: Vec<Occurrence>,
    pub groups: Vec<LayerGroup>,
    /// Group ids per level; `levels[0]` is level 1.
    pub levels: Vec<Vec<GroupId>>,
}

/// One edge of a path in the trie-like graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathEdge {
    Tree(NodeId, NodeId),
    Span(NodeId, NodeId),
}

/// True iff every edge is a tree edge or a span carrying `conj_id`.
pub fn assignment_condition(g: &TrieLikeGraph, path: &[PathEdge], conj_id: ConjId) -> bool {
    path.iter().all(|e| match *e {
        PathEdge::Tree(u, v) => g.node(v).parent == Some(u),
        PathEdge::Span(u, v) => g.span(u, v).is_some_and(|s| s.conj_ids.contains(conj_id)),
    })
}

/// The graph prefix, the labels on the tree path root→`v`, and the labels
/// visited by `path_to_leaf` set true; everything else false.
pub fn extract_assignment(g: &TrieLikeGraph, v: NodeId, path_to_leaf: &[PathEdge]) -> Assignment {
    let below = path_to_leaf.iter().map(|e| match *e {
        PathEdge::Tree(_, x) | PathEdge::Span(_, x) => g.label(x),
    });
    assignment_from_labels(g, v, below)
}

pub(crate) fn assignment_from_labels(
    g: &TrieLikeGraph,
    v: NodeId,
    below: impl IntoIterator<Item = Label>,
) -> Assignment {
    let mut a = Assignment::all(g.num_vars, false);
    for &var in &g.prefix {
        a.set(var, true);
    }
    let above = g.tree_path(v).into_iter().map(|x| g.label(x));
    for label in above.chain(below) {
        if let Some(var) = label.variable() {
            a.set(var, true);
        }
    }
    a
}

impl LayeredGraph {
    /// Level 1: one occurrence per `$` leaf that carries ids.
    pub fn new(g: &TrieLikeGraph) -> Self {
        let mut lg = LayeredGraph::default();
        let leaves: Vec<NodeId> = g.leaves().filter(|&l| !g.node(l).leaf_conj_ids.is_empty()).collect();
        if leaves.is_empty() {
            return lg;
        }
        let gid = lg.push_group(Label::End, 1, None);
        for leaf in leaves {
            lg.push_occurrence(leaf, g.node(leaf).leaf_conj_ids.clone(), gid, Vec::new());
        }
        lg.levels.push(vec![gid]);
        lg
    }

    fn push_group(&mut self, label: Label, level: usize, below: Option<GroupId>) -> GroupId {
        self.groups.push(LayerGroup {
            label,
            level,
            below,
            members: Vec::new(),
        });
        self.groups.len() - 1
    }

    fn push_occurrence(&mut self, node: NodeId, alive: ConjSet, group: GroupId, producers: Vec<OccId>) -> OccId {
        let id = self.occurrences.len();
        self.occurrences.push(Occurrence {
            node,
            alive,
            group,
            producers,
            removed: false,
        });
        self.groups[group].members.push(id);
        id
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn live_members(&self, group: GroupId) -> impl Iterator<Item = OccId> + '_ {
        self.groups[group]
            .members
            .iter()
            .copied()
            .filter(|&o| !self.occurrences[o].removed)
    }

    pub fn live_size(&self, group: GroupId) -> usize {
        self.live_members(group).count()
    }

    /// Labels strictly below an occurrence, nearest first.
    pub fn labels_below(&self, occ: OccId) -> Vec<Label> {
        let mut out = Vec::new();
        let mut cur = self.groups[self.occurrences[occ].group].below;
        while let Some(gid) = cur {
            out.push(self.groups[gid].label);
            cur = self.groups[gid].below;
        }
        out
    }

    pub fn assignment_of(&self, g: &TrieLikeGraph, occ: OccId) -> Assignment {
        assignment_from_labels(g, self.occurrences[occ].node, self.labels_below(occ))
    }

    /// Builds the next level from every group at the top level with at
    /// least two live members. Returns the new occurrence ids, or `None`
    /// when nothing expands.
    pub fn expand(&mut self, g: &TrieLikeGraph) -> Option<std::ops::Range<OccId>> {
        self.expand_limited(g, usize::MAX).map(|(r, _)| r)
    }

    /// Like [`LayeredGraph::expand`], but creates at most `limit`
    /// occurrences. The flag is set when the level was cut short.
    pub fn expand_limited(&mut self, g: &TrieLikeGraph, limit: usize) -> Option<(std::ops::Range<OccId>, bool)> {
        let top = self.levels.last()?.clone();
        let mut cut = false;
        let level = self.levels.len() + 1;
        let start = self.occurrences.len();
        let mut new_groups = Vec::new();
        let mut slot_of: Vec<usize> = vec![usize::MAX; g.len()];
        for gid in top {
            if self.live_size(gid) < 2 {
                continue;
            }
            // Parent node -> (alive, producers), in first-seen order.
            let mut parents: Vec<(NodeId, ConjSet, Vec<OccId>)> = Vec::new();
            let members: Vec<OccId> = self.live_members(gid).collect();
            for occ in members {
                let o = &self.occurrences[occ];
                let x = o.node;
                let mut add = |p: NodeId, ids: Option<&ConjSet>| {
                    let slot = &mut slot_of[p];
                    if *slot == usize::MAX {
                        *slot = parents.len();
                        parents.push((p, ConjSet::new(), Vec::new()));
                    }
                    let entry = &mut parents[*slot];
                    match ids {
                        None => entry.1.union_with(&o.alive),
                        Some(ids) => entry.1.union_with_intersection(&o.alive, ids),
                    }
                    entry.2.push(occ);
                };
                if let (Some(p), false) = (g.node(x).parent, o.alive.is_empty()) {
                    add(p, None);
                }
                for s in g.spans_into(x) {
                    if o.alive.intersects(&s.conj_ids) {
                        add(s.from, Some(&s.conj_ids));
                    }
                }
            }
            for (p, _, _) in &parents {
                slot_of[*p] = usize::MAX;
            }
            let mut by_label: HashMap<Label, GroupId> = HashMap::new();
            for (p, alive, producers) in parents {
                if self.occurrences.len() - start >= limit {
                    cut = true;
                    break;
                }
                let label = g.label(p);
                let ng = match by_label.get(&label) {
                    Some(&ng) => ng,
                    None => {
                        let ng = self.push_group(label, level, Some(gid));
                        by_label.insert(label, ng);
                        new_groups.push(ng);
                        ng
                    }
                };
                self.push_occurrence(p, alive, ng, producers);
            }
            if cut {
                break;
            }
        }
        if new_groups.is_empty() {
            return None;
        }
        self.levels.push(new_groups);
        Some((start..self.occurrences.len(), cut))
    }
}

/// Builds every level, expanding until no group has two live members or
/// `budget` occurrences exist. Returns whether the budget was hit.
pub fn build_layered(g: &TrieLikeGraph, budget: usize) -> (LayeredGraph, bool) {
    let mut lg = LayeredGraph::new(g);
    while lg.occurrences.len() < budget {
        match lg.expand_limited(g, budget - lg.occurrences.len()) {
            None => return (lg, false),
            Some((_, true)) => return (lg, true),
            Some((_, false)) => {}
        }
    }
    (lg, true)
}

/// A candidate answer: the ids satisfied by `assignment`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub conj_ids: ConjSet,
    pub assignment: Assignment,
}

/// The largest alive set over all occurrences, first found on ties.
pub fn find_subset(g: &TrieLikeGraph, lg: &LayeredGraph) -> Option<Candidate> {
    let mut best: Option<OccId> = None;
    for (i, o) in lg.occurrences.iter().enumerate() {
        if best.is_none_or(|b| o.alive.len() > lg.occurrences[b].alive.len()) {
            best = Some(i);
        }
    }
    best.map(|b| Candidate {
        conj_ids: lg.occurrences[b].alive.clone(),
        assignment: lg.assignment_of(g, b),
    })
}
