//! Level-by-level search with repeated-node handling and recursive calls.

use std::collections::{HashMap, HashSet};

use crate::conjset::ConjSet;
use crate::triegraph::{NodeId, TrieLikeGraph};

use super::layered::{find_subset, LayeredGraph, OccId};
use super::reach::{compute_rs_all, compute_upbound};
use super::recursive::build_recursive_graph;
use super::trace::{Outcome, RepeatCase, TraceEvent, TraceRs};
use super::Ctx;

/// Classifies the occurrences of one node at one level by pairwise
/// ancestry of the nodes that produced them.
pub fn classify(g: &TrieLikeGraph, lg: &LayeredGraph, occs: &[OccId]) -> RepeatCase {
    let nodes: Vec<Vec<NodeId>> = occs
        .iter()
        .map(|&o| {
            let mut v: Vec<NodeId> = producer_nodes(lg, o).collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    // Common case: every producer lies on one root path.
    let mut all: Vec<NodeId> = nodes.iter().flatten().copied().collect();
    all.sort_unstable_by_key(|&n| g.node(n).pre);
    all.dedup();
    if nodes.iter().filter(|v| !v.is_empty()).count() >= 2
        && all.windows(2).all(|w| g.is_ancestor(w[0], w[1]))
    {
        return RepeatCase::Case2;
    }
    let mut comparable = false;
    let mut incomparable = false;
    for (i, a) in nodes.iter().enumerate() {
        for b in &nodes[i + 1..] {
            for &p in a {
                for &q in b {
                    if g.comparable(p, q) {
                        comparable = true;
                    } else {
                        incomparable = true;
                    }
                    if comparable && incomparable {
                        return RepeatCase::Case3;
                    }
                }
            }
        }
    }
    if comparable {
        RepeatCase::Case2
    } else {
        RepeatCase::Case1
    }
}

fn producer_nodes(lg: &LayeredGraph, occ: OccId) -> impl Iterator<Item = NodeId> + '_ {
    lg.occurrences[occ].producers.iter().map(|&p| lg.occurrences[p].node)
}

/// The occurrence holding the producer closest to the root.
fn topmost(g: &TrieLikeGraph, lg: &LayeredGraph, occs: &[OccId]) -> OccId {
    let depth = |o: OccId| {
        producer_nodes(lg, o)
            .map(|p| g.node(p).depth)
            .min()
            .unwrap_or(u32::MAX)
    };
    let mut best = occs[0];
    for &o in &occs[1..] {
        if depth(o) < depth(best) {
            best = o;
        }
    }
    best
}

pub(crate) fn search_graph(ctx: &mut Ctx, h: &TrieLikeGraph, depth: u32) {
    let mut lg = LayeredGraph::new(h);
    ctx.stats.work += lg.occurrences.len() as u64;
    for occ in 0..lg.occurrences.len() {
        ctx.offer(h, &lg, occ);
    }
    let mut memo: HashSet<NodeId> = HashSet::new();
    loop {
        if ctx.budget_exhausted() {
            ctx.truncated = true;
            break;
        }
        let remaining = ctx.opts.work_budget.saturating_sub(ctx.stats.work);
        let limit = usize::try_from(remaining).unwrap_or(usize::MAX);
        let Some((range, cut)) = lg.expand_limited(h, limit) else { break };
        ctx.truncated |= cut;
        ctx.stats.levels_built += 1;
        ctx.stats.work += range.len() as u64;
        for occ in range.clone() {
            ctx.offer(h, &lg, occ);
        }

        let mut by_node: Vec<(NodeId, Vec<OccId>)> = Vec::new();
        let mut index: HashMap<NodeId, usize> = HashMap::new();
        for occ in range {
            let node = lg.occurrences[occ].node;
            let slot = *index.entry(node).or_insert_with(|| {
                by_node.push((node, Vec::new()));
                by_node.len() - 1
            });
            by_node[slot].1.push(occ);
        }
        let level = lg.num_levels();
        for (v, occs) in by_node {
            if occs.len() < 2 {
                continue;
            }
            let case = classify(h, &lg, &occs);
            if case != RepeatCase::Case2 && memo.insert(v) {
                recurse(ctx, h, v, depth, level, case, occs.len());
            }
            merge(ctx, &mut lg, h, &occs, case);
        }
    }
    if let Some(c) = find_subset(h, &lg) {
        ctx.offer_candidate(c);
    }
}

fn merge(ctx: &mut Ctx, lg: &mut LayeredGraph, h: &TrieLikeGraph, occs: &[OccId], case: RepeatCase) {
    match case {
        RepeatCase::Case1 => {
            ctx.stats.merges_case1 += 1;
            let mut keep = occs[0];
            for &o in &occs[1..] {
                if lg.occurrences[o].alive.len() > lg.occurrences[keep].alive.len() {
                    keep = o;
                }
            }
            for &o in occs {
                if o != keep {
                    lg.occurrences[o].removed = true;
                }
            }
        }
        RepeatCase::Case2 | RepeatCase::Case3 => {
            if case == RepeatCase::Case2 {
                ctx.stats.merges_case2 += 1;
            } else {
                ctx.stats.merges_case3 += 1;
            }
            let rep = topmost(h, lg, occs);
            let rep_producers: Vec<NodeId> = producer_nodes(lg, rep).collect();
            for &o in occs {
                if o == rep {
                    continue;
                }
                let unrelated = producer_nodes(lg, o)
                    .all(|p| rep_producers.iter().all(|&q| !h.comparable(p, q)));
                let drop = if case == RepeatCase::Case3 && unrelated {
                    true
                } else {
                    ctx.opts.case2_check && lg.live_size(lg.occurrences[o].group) < 2
                };
                if drop {
                    lg.occurrences[o].removed = true;
                }
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    ctx: &mut Ctx,
    h: &TrieLikeGraph,
    v: NodeId,
    depth: u32,
    level: usize,
    case: RepeatCase,
    occurrences: usize,
) {
    let rs = compute_rs_all(h, v);
    let ub = compute_upbound(&rs, h);
    let mut event = TraceEvent {
        depth,
        graph_nodes: h.len(),
        level,
        node: h.name(v),
        case,
        occurrences,
        rs: if ctx.opts.trace {
            rs.iter().map(|s| TraceRs::new(h, s)).collect()
        } else {
            Vec::new()
        },
        upbound: ub.iter().map(|&w| h.name(w)).collect(),
        outcome: Outcome::NoBoundary,
        subgraph_nodes: None,
        found: Vec::new(),
        best_after: ctx.best_size(),
    };
    let sub = if ub.len() >= 2 {
        Some(build_recursive_graph(h, v, &ub))
    } else {
        None
    };
    let alpha = ctx.best_size();
    let outcome = match &sub {
        None => Outcome::NoBoundary,
        Some(r) if r.members.len() < 2 => Outcome::NoBoundary,
        Some(r) if ctx.opts.prune && r.members.len() < alpha => Outcome::Pruned,
        Some(r) if r.graph.len() >= h.len() => Outcome::NoProgress,
        Some(_) if depth + 1 > ctx.max_depth => Outcome::DepthCap,
        Some(_) if ctx.budget_exhausted() => Outcome::BudgetExhausted,
        Some(_) => Outcome::Recursed,
    };
    event.outcome = outcome;
    event.subgraph_nodes = sub.as_ref().map(|r| r.graph.len());
    match outcome {
        Outcome::Pruned => ctx.stats.pruned_calls += 1,
        Outcome::NoProgress => ctx.stats.skipped_no_progress += 1,
        Outcome::DepthCap => {
            ctx.stats.depth_cap_hits += 1;
            ctx.truncated = true;
        }
        Outcome::BudgetExhausted => ctx.truncated = true,
        Outcome::NoBoundary | Outcome::Recursed => {}
    }

    let slot = ctx.trace.len();
    if ctx.opts.trace {
        ctx.trace.push(event);
    }
    if outcome != Outcome::Recursed {
        return;
    }
    let sub = sub.expect("recursed");
    ctx.stats.recursive_calls += 1;
    ctx.stats.max_depth_reached = ctx.stats.max_depth_reached.max(depth + 1);
    ctx.found_stack.push(Vec::new());
    search_graph(ctx, &sub.graph, depth + 1);
    let found = ctx.found_stack.pop().unwrap_or_default();
    if ctx.opts.trace {
        let best = ctx.best_size();
        let e = &mut ctx.trace[slot];
        e.found = found.iter().map(ConjSet::to_vec).collect();
        e.best_after = best;
    }
}
