//! Subgraphs for recursive calls: the subtrees under an upper boundary,
//! merged by label string and hung below a copy of the repeated node.

use std::collections::HashMap;

use crate::conjset::ConjSet;
use crate::triegraph::{NodeId, TrieBuilder, TrieLikeGraph};

#[derive(Debug, Clone)]
pub struct RecursiveGraph {
    pub graph: TrieLikeGraph,
    /// Boundary nodes that connect to `v` and carry ids, in input order.
    pub members: Vec<NodeId>,
    /// Per member: the ids allowed to flow through it.
    pub allowed: Vec<ConjSet>,
}

/// Ids that can enter the subtree of `w` from `v`: everything through `w`
/// for a tree child, the span's ids otherwise, restricted to ids through `w`.
fn connecting_ids(h: &TrieLikeGraph, v: NodeId, w: NodeId) -> ConjSet {
    let through = &h.node(w).through;
    if h.node(w).parent == Some(v) {
        through.clone()
    } else {
        h.span(v, w)
            .map(|s| s.conj_ids.intersection(through))
            .unwrap_or_default()
    }
}

/// Builds the subgraph `D' = {v} ∪ D'` for the boundary `ub` of `v` in `h`.
///
/// Each member's subtree keeps only the ids on its connecting edge. Nodes
/// with equal label strings from root merge; merged leaves and spans union
/// their ids. Spans of `v` into a member's subtree become spans of the new
/// root. The new graph's prefix extends `h`'s with the tree path above `v`.
pub fn build_recursive_graph(h: &TrieLikeGraph, v: NodeId, ub: &[NodeId]) -> RecursiveGraph {
    let mut b = TrieBuilder::new(h.label(v));
    b.add_origins(TrieBuilder::ROOT, &h.node(v).origins);

    let mut members = Vec::new();
    let mut allowed = Vec::new();
    let mut raw_maps: Vec<HashMap<NodeId, usize>> = Vec::new();
    for &w in ub {
        let ids = connecting_ids(h, v, w);
        if ids.is_empty() {
            continue;
        }
        let mut raw: HashMap<NodeId, usize> = HashMap::new();
        for x in h.subtree(w) {
            let parent_raw = if x == w {
                TrieBuilder::ROOT
            } else {
                raw[&h.node(x).parent.expect("inside subtree")]
            };
            let r = b.child(parent_raw, h.label(x));
            b.add_origins(r, &h.node(x).origins);
            let leaf = h.node(x).leaf_conj_ids.intersection(&ids);
            if !leaf.is_empty() {
                b.add_leaf_ids(r, &leaf);
            }
            raw.insert(x, r);
        }
        members.push(w);
        allowed.push(ids);
        raw_maps.push(raw);
    }

    let mut prefix = h.prefix.clone();
    let path = h.tree_path(v);
    prefix.extend(path[..path.len() - 1].iter().filter_map(|&x| h.label(x).variable()));

    let (mut graph, map) = b.finish(h.num_vars, prefix, true);
    for ((&w, ids), raw) in members.iter().zip(&allowed).zip(&raw_maps) {
        let to_new = |x: NodeId| raw.get(&x).and_then(|&r| map[r]);
        for x in h.subtree(w) {
            for s in h.spans_from(x) {
                if let (Some(a), Some(c)) = (to_new(x), to_new(s.to)) {
                    graph.add_span(a, c, &s.conj_ids.intersection(ids));
                }
            }
        }
        for s in h.spans_from(v) {
            if s.to != w && h.subtree(w).contains(&s.to) {
                if let Some(c) = to_new(s.to) {
                    graph.add_span(graph.root, c, &s.conj_ids.intersection(ids));
                }
            }
        }
    }
    RecursiveGraph {
        graph,
        members,
        allowed,
    }
}
