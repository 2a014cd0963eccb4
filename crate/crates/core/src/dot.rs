//! Graphviz output. Tree and main-path edges are solid; spans are dashed
//! and labelled with their conjunction ids.

use std::fmt::Write;

use crate::pstar::PStarGraph;
use crate::search::LayeredGraph;
use crate::triegraph::TrieLikeGraph;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn trie_to_dot(g: &TrieLikeGraph) -> String {
    let mut out = String::from("digraph G {\n  rankdir=TB;\n  node [shape=circle, fontsize=10];\n");
    for n in &g.nodes {
        let mut label = format!("{}\\n{}\\n({}, {})", g.name(n.id), escape(&n.label.to_string()), n.pre, n.post);
        if !n.leaf_conj_ids.is_empty() {
            let _ = write!(label, "\\n{}", n.leaf_conj_ids);
        }
        let _ = writeln!(out, "  n{} [label=\"{}\"];", n.id, label);
    }
    for n in &g.nodes {
        for &c in &n.children {
            let _ = writeln!(out, "  n{} -> n{};", n.id, c);
        }
    }
    for s in &g.spans {
        let _ = writeln!(
            out,
            "  n{} -> n{} [style=dashed, label=\"{}\", constraint=false];",
            s.from, s.to, s.conj_ids
        );
    }
    out.push_str("}\n");
    out
}

pub fn pstar_to_dot(p: &PStarGraph) -> String {
    let mut out = format!("digraph P{} {{\n  rankdir=LR;\n  node [shape=circle, fontsize=10];\n", p.conj_id);
    for (i, l) in p.labels.iter().enumerate() {
        let shape = if p.optional[i] { ", style=dashed" } else { "" };
        let _ = writeln!(out, "  p{i} [label=\"{}\"{shape}];", escape(&l.to_string()));
    }
    for (i, j) in p.main_edges() {
        let _ = writeln!(out, "  p{i} -> p{j};");
    }
    for &(i, j) in &p.spans {
        let _ = writeln!(out, "  p{i} -> p{j} [style=dashed];");
    }
    out.push_str("}\n");
    out
}

/// One level of the layered graph: a cluster per group, an edge from every
/// occurrence to the occurrences that produced it.
pub fn layered_level_to_dot(g: &TrieLikeGraph, lg: &LayeredGraph, level: usize) -> String {
    let mut out = format!("digraph L{level} {{\n  rankdir=BT;\n  node [shape=box, fontsize=10];\n");
    let Some(groups) = level.checked_sub(1).and_then(|i| lg.levels.get(i)) else {
        out.push_str("}\n");
        return out;
    };
    for &gid in groups {
        let grp = &lg.groups[gid];
        let _ = writeln!(out, "  subgraph cluster_g{gid} {{\n    label=\"{}\";", escape(&grp.label.to_string()));
        for &o in &grp.members {
            let occ = &lg.occurrences[o];
            let style = if occ.removed { ", style=dotted" } else { "" };
            let _ = writeln!(out, "    o{o} [label=\"{} {}\"{style}];", g.name(occ.node), occ.alive);
        }
        out.push_str("  }\n");
        for &o in &grp.members {
            for &p in &lg.occurrences[o].producers {
                let occ = &lg.occurrences[p];
                let _ = writeln!(out, "  o{p} [label=\"{} {}\"];", g.name(occ.node), occ.alive);
                let _ = writeln!(out, "  o{p} -> o{o};");
            }
        }
    }
    out.push_str("}\n");
    out
}
