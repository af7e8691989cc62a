//! Coordination conventions.
//!
//! Coordinated dependents of one head need nothing special: the first
//! conjunct's subtree already contains the conjunction and the other
//! conjuncts, so it moves as one chunk. Coordinated heads that each have
//! their own dependents are handled as separate groups by the traversal.
//! The remaining case is a dependent attached to the second of two
//! coordinated heads while the first has none. The parse cannot tell a
//! shared dependent from a private one, so the heads and the conjunction
//! are treated as one chunk and the dependent is reflected around all of
//! it. For private dependents this knowingly produces a wrong order.

use alloc::vec::Vec;

use super::{CorrelationPair, Decision, Span, SwapPolicy, SwapRecord};
use crate::sentence::Sentence;
use crate::tree::{DepTree, Node};

fn has_accepted_child(
    tree: &DepTree<'_>,
    pair: CorrelationPair,
    policy: &dyn SwapPolicy,
    node: Node,
) -> bool {
    policy.is_anchor(pair, tree, node)
        && tree
            .children(node)
            .iter()
            .any(|&c| policy.classify(pair, tree, node, c) == Decision::Accept)
}

/// If `node` is a coordinated head whose dependents should be reflected
/// around the whole coordination, returns the extended anchor tokens and the
/// node whose subtree bounds the chunk.
pub fn coordinated_head_chunk(
    tree: &DepTree<'_>,
    pair: CorrelationPair,
    policy: &dyn SwapPolicy,
    node: Node,
    anchor: &[Node],
    movers: &[(Node, Vec<Node>)],
) -> Option<(Vec<Node>, Node)> {
    if !pair.anchor_is_head() || tree.token(node).base_rel() != "conj" {
        return None;
    }
    let governor = tree.parent(node)?;
    if !policy.is_anchor(pair, tree, governor) || has_accepted_child(tree, pair, policy, governor)
    {
        return None;
    }

    let g = tree.position(governor);
    let v = tree.position(node);
    let far_side = movers.iter().flat_map(|(_, span)| span).all(|&n| {
        let p = tree.position(n);
        if g < v {
            p > v
        } else {
            p < v
        }
    });
    if !far_side {
        return None;
    }
    let (lo, hi) = if g < v { (g, v) } else { (v, g) };
    let blocked = tree.children(governor).iter().any(|&c| {
        let p = tree.position(c);
        c != node
            && p > lo
            && p < hi
            && tree.token(c).base_rel() == "conj"
            && has_accepted_child(tree, pair, policy, c)
    });
    if blocked {
        return None;
    }

    let mut chunk = policy.anchor_span(pair, tree, governor, &[]);
    chunk.push(governor);
    chunk.extend_from_slice(anchor);
    Some((chunk, governor))
}

/// Applies the coordinated-head convention to a record identified on
/// `sentence`. Records that do not involve coordinated heads are returned
/// unchanged.
pub fn resolve_coordination(
    sentence: &Sentence,
    record: &SwapRecord,
    policy: &dyn SwapPolicy,
) -> SwapRecord {
    let Ok(tree) = DepTree::new(sentence) else {
        return record.clone();
    };
    let find = |id| (0..tree.len()).find(|&n| tree.id(n) == id);
    let Some(node) = find(record.head_span.head_id) else {
        return record.clone();
    };
    let mut movers = Vec::new();
    for span in &record.dep_spans {
        let nodes: Option<Vec<Node>> = span.token_ids.iter().map(|&id| find(id)).collect();
        match (find(span.head_id), nodes) {
            (Some(h), Some(nodes)) => movers.push((h, nodes)),
            _ => return record.clone(),
        }
    }
    let anchor: Option<Vec<Node>> = record
        .head_span
        .token_ids
        .iter()
        .map(|&id| find(id))
        .collect();
    let Some(anchor) = anchor else {
        return record.clone();
    };

    match coordinated_head_chunk(&tree, record.pair_type, policy, node, &anchor, &movers) {
        Some((chunk, _)) => {
            let Some((first, last)) = tree.extent(&chunk) else {
                return record.clone();
            };
            let mut out = record.clone();
            out.head_span = Span {
                token_ids: (first..=last).map(|p| tree.id(tree.node_at(p))).collect(),
                head_id: record.head_span.head_id,
            };
            out
        }
        None => record.clone(),
    }
}
