//! The trie over all main paths with every conjunction's spans overlaid.
//!
//! Node ids equal preorder positions minus one, so `v<k>` names are stable
//! and match preorder. Children keep first-insertion order.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::conjset::{ConjId, ConjSet};
use crate::formula::{DnfFormula, Variable};
use crate::pstar::{build_p_star_graph, PStarGraph};
use crate::sequencing::{
    build_ordering, build_sequences, compute_frequencies, GlobalOrdering, Label, SequencingError,
    TieBreak, VariableSequence,
};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrieError {
    #[error("main path of conjunction {0} is not in the trie")]
    PathNotFound(ConjId),
    #[error(transparent)]
    Sequencing(#[from] SequencingError),
}

#[derive(Debug, Clone, Serialize)]
pub struct TrieNode {
    pub id: NodeId,
    pub label: Label,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    pub pre: u32,
    pub post: u32,
    pub depth: u32,
    /// Non-empty only on `$` leaves.
    pub leaf_conj_ids: ConjSet,
    /// Conjunctions whose main path passes through this node.
    pub through: ConjSet,
    /// Ids of the nodes of the top-level graph this node stands for. A node
    /// of a merged subgraph has several.
    pub origins: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpanEdge {
    pub from: NodeId,
    pub to: NodeId,
    pub conj_ids: ConjSet,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrieLikeGraph {
    pub nodes: Vec<TrieNode>,
    pub root: NodeId,
    pub spans: Vec<SpanEdge>,
    /// Variables set true above the root. Empty for a top-level graph; a
    /// recursive subgraph inherits the tree path above its root.
    pub prefix: Vec<Variable>,
    pub num_vars: u32,
    #[serde(skip)]
    span_index: HashMap<(NodeId, NodeId), usize>,
    #[serde(skip)]
    spans_out: Vec<Vec<usize>>,
    #[serde(skip)]
    spans_in: Vec<Vec<usize>>,
}

impl TrieLikeGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &TrieNode {
        &self.nodes[id]
    }

    pub fn label(&self, id: NodeId) -> Label {
        self.nodes[id].label
    }

    /// Display name: `v4`, or `v4-11` for a node merged from v4 and v11.
    pub fn name(&self, id: NodeId) -> String {
        let parts: Vec<String> = self.nodes[id].origins.iter().map(|o| o.to_string()).collect();
        format!("v{}", parts.join("-"))
    }

    /// Node whose name is `name`, if any.
    pub fn find_by_name(&self, name: &str) -> Option<NodeId> {
        (0..self.len()).find(|&id| self.name(id) == name)
    }

    /// Proper ancestry via the (pre, post) encoding.
    pub fn is_ancestor(&self, u: NodeId, v: NodeId) -> bool {
        let (a, b) = (&self.nodes[u], &self.nodes[v]);
        a.pre < b.pre && a.post > b.post
    }

    pub fn comparable(&self, u: NodeId, v: NodeId) -> bool {
        u == v || self.is_ancestor(u, v) || self.is_ancestor(v, u)
    }

    /// Tree path from the root to `v`, both inclusive.
    pub fn tree_path(&self, v: NodeId) -> Vec<NodeId> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.nodes[cur].parent {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    pub fn leaves(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes
            .iter()
            .filter(|n| n.label == Label::End)
            .map(|n| n.id)
    }

    /// Nodes of the subtree rooted at `v` (inclusive), in preorder.
    pub fn subtree(&self, v: NodeId) -> std::ops::Range<NodeId> {
        // Ids are preorder positions, so a subtree is a contiguous range.
        let n = &self.nodes[v];
        let size = (n.post + n.depth + 1 - n.pre) as usize;
        v..v + size
    }

    pub fn span(&self, from: NodeId, to: NodeId) -> Option<&SpanEdge> {
        self.span_index.get(&(from, to)).map(|&i| &self.spans[i])
    }

    pub fn spans_from(&self, u: NodeId) -> impl Iterator<Item = &SpanEdge> + '_ {
        self.spans_out[u].iter().map(|&i| &self.spans[i])
    }

    pub fn spans_into(&self, v: NodeId) -> impl Iterator<Item = &SpanEdge> + '_ {
        self.spans_in[v].iter().map(|&i| &self.spans[i])
    }

    /// Adds a span, merging its ids into an existing edge with the same ends.
    pub fn add_span(&mut self, from: NodeId, to: NodeId, ids: &ConjSet) {
        if ids.is_empty() {
            return;
        }
        match self.span_index.get(&(from, to)) {
            Some(&i) => self.spans[i].conj_ids.union_with(ids),
            None => {
                let i = self.spans.len();
                self.spans.push(SpanEdge {
                    from,
                    to,
                    conj_ids: ids.clone(),
                });
                self.span_index.insert((from, to), i);
                self.spans_out[from].push(i);
                self.spans_in[to].push(i);
            }
        }
    }

    /// Recomputes (pre, post) by an iterative traversal; 1-based.
    pub fn assign_pre_post(&mut self) {
        let mut pre = 0;
        let mut post = 0;
        let mut stack: Vec<(NodeId, usize)> = vec![(self.root, 0)];
        pre += 1;
        self.nodes[self.root].pre = pre;
        while let Some((v, next)) = stack.pop() {
            if let Some(&c) = self.nodes[v].children.get(next) {
                stack.push((v, next + 1));
                pre += 1;
                self.nodes[c].pre = pre;
                stack.push((c, 0));
            } else {
                post += 1;
                self.nodes[v].post = post;
            }
        }
    }

    /// Maps each conjunction's main path onto trie nodes and adds its spans.
    pub fn overlay_spans(&mut self, pgraphs: &[PStarGraph]) -> Result<(), TrieError> {
        for g in pgraphs {
            let path = self
                .locate_path(&g.labels)
                .ok_or(TrieError::PathNotFound(g.conj_id))?;
            let id = ConjSet::from([g.conj_id]);
            for &(i, j) in &g.spans {
                self.add_span(path[i], path[j], &id);
            }
        }
        Ok(())
    }

    /// Trie nodes along a label string starting at the root.
    pub fn locate_path(&self, labels: &[Label]) -> Option<Vec<NodeId>> {
        let (first, rest) = labels.split_first()?;
        if self.nodes[self.root].label != *first {
            return None;
        }
        let mut path = vec![self.root];
        let mut cur = self.root;
        for &l in rest {
            cur = *self.nodes[cur]
                .children
                .iter()
                .find(|&&c| self.nodes[c].label == l)?;
            path.push(cur);
        }
        Some(path)
    }

    /// Ids carried by the edge `from → to`: every id through `to` for a tree
    /// edge, the span's ids for a span, nothing otherwise.
    pub fn edge_ids(&self, from: NodeId, to: NodeId) -> Option<ConjSet> {
        if self.nodes[to].parent == Some(from) {
            Some(self.nodes[to].through.clone())
        } else {
            self.span(from, to).map(|s| s.conj_ids.clone())
        }
    }
}

/// Incremental trie construction; `finish` renumbers nodes to preorder.
#[derive(Debug, Clone)]
pub struct TrieBuilder {
    nodes: Vec<RawNode>,
}

#[derive(Debug, Clone)]
struct RawNode {
    label: Label,
    children: Vec<usize>,
    leaf: ConjSet,
    origins: Vec<NodeId>,
}

impl TrieBuilder {
    pub fn new(root_label: Label) -> Self {
        TrieBuilder {
            nodes: vec![RawNode {
                label: root_label,
                children: Vec::new(),
                leaf: ConjSet::new(),
                origins: Vec::new(),
            }],
        }
    }

    pub const ROOT: usize = 0;

    /// The child of `parent` labelled `label`, created if missing.
    pub fn child(&mut self, parent: usize, label: Label) -> usize {
        if let Some(&c) = self.nodes[parent]
            .children
            .iter()
            .find(|&&c| self.nodes[c].label == label)
        {
            return c;
        }
        let id = self.nodes.len();
        self.nodes.push(RawNode {
            label,
            children: Vec::new(),
            leaf: ConjSet::new(),
            origins: Vec::new(),
        });
        self.nodes[parent].children.push(id);
        id
    }

    pub fn add_leaf_ids(&mut self, node: usize, ids: &ConjSet) {
        self.nodes[node].leaf.union_with(ids);
    }

    pub fn add_origins(&mut self, node: usize, origins: &[NodeId]) {
        self.nodes[node].origins.extend_from_slice(origins);
    }

    /// Inserts a label string below the root (the first label is the
    /// root's own) and returns the raw node per position.
    pub fn insert_path(&mut self, labels: &[Label]) -> Vec<usize> {
        let mut path = vec![Self::ROOT];
        let mut cur = Self::ROOT;
        for &l in &labels[1..] {
            cur = self.child(cur, l);
            path.push(cur);
        }
        path
    }

    /// Renumbers to preorder and computes the tree encoding. Subtrees that
    /// reach no leaf id are dropped when `prune_empty` is set (the root is
    /// always kept). Returns the graph and the raw-to-final id map.
    pub fn finish(
        self,
        num_vars: u32,
        prefix: Vec<Variable>,
        prune_empty: bool,
    ) -> (TrieLikeGraph, Vec<Option<NodeId>>) {
        let n = self.nodes.len();
        // Raw ids are creation order, so children come after parents and a
        // reverse sweep sees every child before its parent.
        let mut through: Vec<ConjSet> = self.nodes.iter().map(|r| r.leaf.clone()).collect();
        for raw in (0..n).rev() {
            for &c in &self.nodes[raw].children {
                let child = through[c].clone();
                through[raw].union_with(&child);
            }
        }

        let mut map: Vec<Option<NodeId>> = vec![None; n];
        let mut order: Vec<(usize, Option<NodeId>, u32)> = Vec::with_capacity(n);
        let mut stack = vec![(Self::ROOT, None, 0u32)];
        while let Some((raw, parent, depth)) = stack.pop() {
            let id = order.len();
            map[raw] = Some(id);
            order.push((raw, parent, depth));
            for &c in self.nodes[raw].children.iter().rev() {
                if prune_empty && through[c].is_empty() {
                    continue;
                }
                stack.push((c, Some(id), depth + 1));
            }
        }

        let mut nodes: Vec<TrieNode> = order
            .iter()
            .map(|&(raw, parent, depth)| {
                let r = &self.nodes[raw];
                let mut origins = r.origins.clone();
                origins.sort_unstable();
                origins.dedup();
                TrieNode {
                    id: map[raw].expect("mapped"),
                    label: r.label,
                    parent,
                    children: Vec::new(),
                    pre: 0,
                    post: 0,
                    depth,
                    leaf_conj_ids: r.leaf.clone(),
                    through: through[raw].clone(),
                    origins,
                }
            })
            .collect();
        for (raw, r) in self.nodes.iter().enumerate() {
            if let Some(id) = map[raw] {
                nodes[id].children = r.children.iter().filter_map(|&c| map[c]).collect();
            }
        }

        let len = nodes.len();
        let mut g = TrieLikeGraph {
            nodes,
            root: 0,
            spans: Vec::new(),
            prefix,
            num_vars,
            span_index: HashMap::new(),
            spans_out: vec![Vec::new(); len],
            spans_in: vec![Vec::new(); len],
        };
        g.assign_pre_post();
        (g, map)
    }
}

/// Trie over the sequences' main paths; identical paths share one leaf.
pub fn build_trie(seqs: &[VariableSequence], num_vars: u32) -> TrieLikeGraph {
    let mut b = TrieBuilder::new(Label::Start);
    for s in seqs {
        let path = b.insert_path(&s.main_path());
        b.add_leaf_ids(*path.last().expect("non-empty path"), &ConjSet::from([s.conj_id]));
    }
    let (mut g, _) = b.finish(num_vars, Vec::new(), false);
    for n in &mut g.nodes {
        n.origins = vec![n.id];
    }
    g
}

/// The full construction for a DNF formula: ordering, sequences, p*-graphs,
/// trie and spans.
pub fn build_graph(
    d: &DnfFormula,
    tie_break: &TieBreak,
) -> Result<(GlobalOrdering, TrieLikeGraph), TrieError> {
    let ordering = build_ordering(&compute_frequencies(d), tie_break)?;
    let seqs = build_sequences(d, &ordering);
    let pgraphs: Vec<PStarGraph> = seqs.iter().map(build_p_star_graph).collect();
    let mut g = build_trie(&seqs, d.num_vars);
    g.overlay_spans(&pgraphs)?;
    Ok((ordering, g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_graph() -> TrieLikeGraph {
        let d = DnfFormula::from_dimacs_conjunctions(
            6,
            &[&[1, 4], &[2, -4], &[2, 5], &[-3, -5], &[3, 6], &[-1, -6]],
        );
        let tb = TieBreak::Explicit([2, 3, 1, 4, 5, 6].map(Variable::new).to_vec());
        build_graph(&d, &tb).unwrap().1
    }

    #[test]
    fn example_trie_shape() {
        let g = example_graph();
        assert_eq!(g.len(), 18);
        assert_eq!(g.node(7).leaf_conj_ids, ConjSet::from([1, 3, 5]));
        assert_eq!((g.node(2).pre, g.node(2).post), (3, 12));
        assert_eq!((g.node(9).pre, g.node(9).post), (10, 6));
        assert_eq!((g.node(0).pre, g.node(0).post), (1, 18));
        assert!(g.is_ancestor(2, 9));
        assert!(!g.is_ancestor(14, 6));
        assert!(!g.is_ancestor(3, 3));
        assert_eq!(g.name(11), "v11");
    }

    #[test]
    fn example_spans() {
        let g = example_graph();
        assert_eq!(g.span(0, 2).unwrap().conj_ids, ConjSet::from([1, 5, 6]));
        assert_eq!(g.span(2, 8).unwrap().conj_ids, ConjSet::from([2]));
        assert_eq!(g.span(1, 11).unwrap().conj_ids, ConjSet::from([6]));
        assert_eq!(g.span(11, 13).unwrap().conj_ids, ConjSet::from([6]));
        assert!(g.span(0, 1).is_none());
    }

    #[test]
    fn ancestry_agrees_with_parent_chain() {
        let g = example_graph();
        for u in 0..g.len() {
            for v in 0..g.len() {
                let walk = g.tree_path(v)[..g.tree_path(v).len() - 1].contains(&u);
                assert_eq!(g.is_ancestor(u, v), walk, "{u} {v}");
            }
        }
    }

    #[test]
    fn single_and_duplicate_sequences() {
        let d = DnfFormula::from_dimacs_conjunctions(2, &[&[1, 2]]);
        let (_, g) = build_graph(&d, &TieBreak::ByIndex).unwrap();
        assert_eq!(g.len(), 4);
        assert!(g.spans.is_empty());
        assert_eq!(g.node(3).leaf_conj_ids, ConjSet::from([1]));

        let d = DnfFormula::from_dimacs_conjunctions(2, &[&[1], &[1]]);
        let (_, g) = build_graph(&d, &TieBreak::ByIndex).unwrap();
        assert_eq!(g.leaves().count(), 1);
        assert_eq!(g.node(3).leaf_conj_ids, ConjSet::from([1, 2]));
    }

    #[test]
    fn single_node_encoding() {
        let (g, _) = TrieBuilder::new(Label::Start).finish(0, Vec::new(), false);
        assert_eq!((g.node(0).pre, g.node(0).post), (1, 1));
    }

    #[test]
    fn subtree_ranges_follow_preorder() {
        let g = example_graph();
        assert_eq!(g.subtree(2), 2..14);
        assert_eq!(g.subtree(14), 14..18);
        assert_eq!(g.subtree(7), 7..8);
    }
}
