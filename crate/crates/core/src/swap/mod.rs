//! Depth-first swapping of correlation-pair instances.
//!
//! The traversal visits every node once, starting at the root and using an
//! explicit stack. At each visited node the policy decides which children
//! pair up with it. The node's own span (the *anchor*) stays in place while
//! the spans of the paired children (the *movers*) are reflected to the other
//! side of it. For `<V, O>`, `<Cop, Pred>` and `<Noun, Genitive>` the anchor
//! is the correlation head and the movers are dependents; for `<Adp, NP>`
//! and `<Aux, V>` the adposition or auxiliary is the mover and the NP or VP
//! is the anchor. Records always report the correlation roles, not the
//! tree roles.

mod coordination;
mod reflect;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::sentence::{Sentence, TokenId, Violation};
use crate::tree::{DepTree, Node};

pub use coordination::{coordinated_head_chunk, resolve_coordination};
pub use reflect::{reflect_dependents, Part};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Language {
    #[serde(rename = "en")]
    English,
    #[serde(rename = "ja")]
    Japanese,
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Language::English => "en",
            Language::Japanese => "ja",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown name `{0}`")]
pub struct UnknownName(pub String);

impl FromStr for Language {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "en" | "english" => Ok(Language::English),
            "ja" | "japanese" => Ok(Language::Japanese),
            _ => Err(UnknownName(s.into())),
        }
    }
}

/// The five targeted correlation pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CorrelationPair {
    #[serde(rename = "vo")]
    VerbObject,
    #[serde(rename = "adp-np")]
    AdpositionNounPhrase,
    #[serde(rename = "cop-pred")]
    CopulaPredicate,
    #[serde(rename = "aux-v")]
    AuxiliaryVerb,
    #[serde(rename = "noun-gen")]
    NounGenitive,
}

impl CorrelationPair {
    pub const ALL: [CorrelationPair; 5] = [
        CorrelationPair::VerbObject,
        CorrelationPair::AdpositionNounPhrase,
        CorrelationPair::CopulaPredicate,
        CorrelationPair::AuxiliaryVerb,
        CorrelationPair::NounGenitive,
    ];

    /// Whether the visited tree node plays the correlation head role.
    pub fn anchor_is_head(self) -> bool {
        !matches!(
            self,
            CorrelationPair::AdpositionNounPhrase | CorrelationPair::AuxiliaryVerb
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            CorrelationPair::VerbObject => "vo",
            CorrelationPair::AdpositionNounPhrase => "adp-np",
            CorrelationPair::CopulaPredicate => "cop-pred",
            CorrelationPair::AuxiliaryVerb => "aux-v",
            CorrelationPair::NounGenitive => "noun-gen",
        }
    }

    /// Notation used in tables, e.g. `<V, O>`.
    pub fn label(self) -> &'static str {
        match self {
            CorrelationPair::VerbObject => "<V, O>",
            CorrelationPair::AdpositionNounPhrase => "<Adp, NP>",
            CorrelationPair::CopulaPredicate => "<Cop, Pred>",
            CorrelationPair::AuxiliaryVerb => "<Aux, V>",
            CorrelationPair::NounGenitive => "<Noun, Genitive>",
        }
    }
}

impl fmt::Display for CorrelationPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CorrelationPair {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        match key.as_str() {
            "vo" | "verbobject" => Ok(CorrelationPair::VerbObject),
            "adpnp" | "adp" => Ok(CorrelationPair::AdpositionNounPhrase),
            "coppred" | "cop" => Ok(CorrelationPair::CopulaPredicate),
            "auxv" | "aux" => Ok(CorrelationPair::AuxiliaryVerb),
            "noungen" | "noungenitive" | "gen" => Ok(CorrelationPair::NounGenitive),
            _ => Err(UnknownName(s.into())),
        }
    }
}

/// A contiguous block of tokens with its internal head.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    /// Token ids in surface order at the time the span was built.
    pub token_ids: Vec<TokenId>,
    pub head_id: TokenId,
}

impl Span {
    fn from_nodes(tree: &DepTree<'_>, nodes: &[Node], head: Node) -> Span {
        Span {
            token_ids: nodes.iter().map(|&n| tree.id(n)).collect(),
            head_id: tree.id(head),
        }
    }

    /// Token ids, sorted numerically.
    pub fn id_set(&self) -> Vec<TokenId> {
        let mut ids = self.token_ids.clone();
        ids.sort_unstable();
        ids
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    NonContiguous,
    CoordinationAmbiguous,
    PolicyExcluded,
}

/// One identified `<H, D>` instance (a silver item), applied or skipped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapRecord {
    pub pair_type: CorrelationPair,
    pub head_span: Span,
    pub dep_spans: Vec<Span>,
    pub applied: bool,
    pub skip_reason: Option<SkipReason>,
}

impl SwapRecord {
    /// Number of `<H, D>` pairs this record stands for.
    pub fn pair_count(&self) -> usize {
        self.dep_spans.len()
    }
}

/// Number of applied `<H, D>` pairs in a record list.
pub fn applied_pairs(records: &[SwapRecord]) -> usize {
    records
        .iter()
        .filter(|r| r.applied)
        .map(SwapRecord::pair_count)
        .sum()
}

/// A policy's verdict on one (node, child) arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    /// The arc is not an instance of the pair.
    NotPair,
    /// The arc is an instance; the child's span moves.
    Accept,
    /// The arc matches the pair's relation but a language rule forbids the
    /// swap. Reported as a skipped record.
    Exclude,
}

/// Language-specific identification and span rules.
///
/// All hooks must be pure functions of the tree (positions included).
pub trait SwapPolicy: Send + Sync {
    fn language(&self) -> Language;

    /// Whether `node` can anchor instances of `pair` at all.
    fn is_anchor(&self, pair: CorrelationPair, tree: &DepTree<'_>, node: Node) -> bool;

    /// Decision for the arc `node -> child`. Only called when `is_anchor`
    /// holds for `node`.
    fn classify(
        &self,
        pair: CorrelationPair,
        tree: &DepTree<'_>,
        node: Node,
        child: Node,
    ) -> Decision;

    /// Tokens of the anchor span given the accepted movers. The engine uses
    /// the surface envelope of the returned set.
    fn anchor_span(
        &self,
        pair: CorrelationPair,
        tree: &DepTree<'_>,
        node: Node,
        movers: &[Node],
    ) -> Vec<Node>;

    /// Tokens of a mover span. Defaults to the child's full subtree.
    fn mover_span(
        &self,
        _pair: CorrelationPair,
        tree: &DepTree<'_>,
        _node: Node,
        child: Node,
    ) -> Vec<Node> {
        tree.subtree(child)
    }
}

/// A policy that never identifies anything.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoopPolicy(pub Option<Language>);

impl SwapPolicy for NoopPolicy {
    fn language(&self) -> Language {
        self.0.unwrap_or(Language::English)
    }

    fn is_anchor(&self, _: CorrelationPair, _: &DepTree<'_>, _: Node) -> bool {
        false
    }

    fn classify(&self, _: CorrelationPair, _: &DepTree<'_>, _: Node, _: Node) -> Decision {
        Decision::NotPair
    }

    fn anchor_span(&self, _: CorrelationPair, _: &DepTree<'_>, node: Node, _: &[Node]) -> Vec<Node> {
        vec![node]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SwapError {
    #[error("sentence is not a valid dependency tree ({} violations)", .0.len())]
    InvalidTree(Vec<Violation>),
}

/// Identifies every instance of `pair` without changing the sentence.
pub fn identify_pairs(
    sentence: &Sentence,
    pair: CorrelationPair,
    policy: &dyn SwapPolicy,
) -> Result<Vec<SwapRecord>, SwapError> {
    run(sentence, pair, policy, false).map(|(_, records)| records)
}

/// Swaps every instance of `pair` depth-first and returns the reordered
/// sentence with all applied and skipped records.
pub fn swap_sentence(
    sentence: &Sentence,
    pair: CorrelationPair,
    policy: &dyn SwapPolicy,
) -> Result<(Sentence, Vec<SwapRecord>), SwapError> {
    let (order, records) = run(sentence, pair, policy, true)?;
    let mut out = sentence.clone();
    out.permute(&order);
    Ok((out, records))
}

fn run(
    sentence: &Sentence,
    pair: CorrelationPair,
    policy: &dyn SwapPolicy,
    apply: bool,
) -> Result<(Vec<Node>, Vec<SwapRecord>), SwapError> {
    let mut tree = DepTree::new(sentence).map_err(SwapError::InvalidTree)?;
    let mut records = Vec::new();
    if tree.is_empty() {
        return Ok((Vec::new(), records));
    }

    let mut visited = vec![false; tree.len()];
    let mut stack = vec![tree.root()];
    while let Some(node) = stack.pop() {
        if visited[node] {
            continue;
        }
        visited[node] = true;
        if let Some((start, region)) = plan(&tree, pair, policy, node, &mut records) {
            if apply {
                tree.rewrite_region(start, &region);
            }
        }
        for child in tree.children_by_position(node) {
            if !visited[child] {
                stack.push(child);
            }
        }
    }
    Ok((tree.order().to_vec(), records))
}

fn sorted_unique(tree: &DepTree<'_>, mut nodes: Vec<Node>) -> Vec<Node> {
    tree.sort_by_position(&mut nodes);
    nodes.dedup();
    nodes
}

fn make_records(
    tree: &DepTree<'_>,
    pair: CorrelationPair,
    anchor: (&[Node], Node),
    movers: &[(Node, Vec<Node>)],
    skip: Option<SkipReason>,
) -> Vec<SwapRecord> {
    let anchor_span = Span::from_nodes(tree, anchor.0, anchor.1);
    let mover_spans = movers.iter().map(|(head, span)| Span::from_nodes(tree, span, *head));
    if pair.anchor_is_head() {
        vec![SwapRecord {
            pair_type: pair,
            head_span: anchor_span,
            dep_spans: mover_spans.collect(),
            applied: skip.is_none(),
            skip_reason: skip,
        }]
    } else {
        mover_spans
            .map(|head_span| SwapRecord {
                pair_type: pair,
                head_span,
                dep_spans: vec![anchor_span.clone()],
                applied: skip.is_none(),
                skip_reason: skip,
            })
            .collect()
    }
}

fn single_skip(
    tree: &DepTree<'_>,
    pair: CorrelationPair,
    policy: &dyn SwapPolicy,
    node: Node,
    child: Node,
    reason: SkipReason,
) -> Vec<SwapRecord> {
    let anchor = sorted_unique(tree, policy.anchor_span(pair, tree, node, &[child]));
    let mover = sorted_unique(tree, policy.mover_span(pair, tree, node, child));
    make_records(tree, pair, (&anchor, node), &[(child, mover)], Some(reason))
}

/// Identifies the group anchored at `node`, appends its records and returns
/// the rewritten region `(start, nodes)` when the group is applicable.
fn plan(
    tree: &DepTree<'_>,
    pair: CorrelationPair,
    policy: &dyn SwapPolicy,
    node: Node,
    records: &mut Vec<SwapRecord>,
) -> Option<(usize, Vec<Node>)> {
    if !policy.is_anchor(pair, tree, node) {
        return None;
    }

    let mut movers: Vec<(Node, Vec<Node>)> = Vec::new();
    for child in tree.children_by_position(node) {
        match policy.classify(pair, tree, node, child) {
            Decision::NotPair => {}
            Decision::Exclude => records.extend(single_skip(
                tree,
                pair,
                policy,
                node,
                child,
                SkipReason::PolicyExcluded,
            )),
            Decision::Accept => {
                let span = sorted_unique(tree, policy.mover_span(pair, tree, node, child));
                if tree.is_contiguous(&span) {
                    movers.push((child, span));
                } else {
                    records.extend(single_skip(
                        tree,
                        pair,
                        policy,
                        node,
                        child,
                        SkipReason::NonContiguous,
                    ));
                }
            }
        }
    }
    if movers.is_empty() {
        return None;
    }

    let heads: Vec<Node> = movers.iter().map(|(h, _)| *h).collect();
    let mut anchor = policy.anchor_span(pair, tree, node, &heads);
    anchor.push(node);
    let mut scope = node;
    if pair.anchor_is_head() {
        if let Some((chunk, root)) = coordinated_head_chunk(tree, pair, policy, node, &anchor, &movers)
        {
            anchor = chunk;
            scope = root;
        }
    }
    let (a_first, a_last) = tree.extent(&anchor)?;
    let envelope: Vec<Node> = (a_first..=a_last).map(|p| tree.node_at(p)).collect();

    let mut owner = vec![usize::MAX; tree.len()];
    let mut overlap = false;
    for (i, (_, span)) in movers.iter().enumerate() {
        for &n in span {
            overlap |= owner[n] != usize::MAX;
            owner[n] = i;
        }
    }
    overlap |= envelope.iter().any(|&n| owner[n] != usize::MAX);
    let skip = if overlap {
        Some(SkipReason::CoordinationAmbiguous)
    } else if envelope.iter().any(|&n| !tree.is_descendant_or_self(n, scope)) {
        Some(SkipReason::NonContiguous)
    } else {
        None
    };
    records.extend(make_records(tree, pair, (&envelope, node), &movers, skip));
    if skip.is_some() {
        return None;
    }

    let mut start = a_first;
    let mut end = a_last;
    for (_, span) in &movers {
        let (first, last) = tree.extent(span)?;
        start = start.min(first);
        end = end.max(last);
    }

    let mut parts = Vec::new();
    let mut p = start;
    while p <= end {
        let n = tree.node_at(p);
        if p == a_first {
            parts.push(Part::Anchor(envelope.clone()));
            p = a_last + 1;
        } else if owner[n] != usize::MAX {
            let span = &movers[owner[n]].1;
            parts.push(Part::Mover(span.clone()));
            p += span.len();
        } else {
            parts.push(Part::Fixed(vec![n]));
            p += 1;
        }
    }
    let region: Vec<Node> = reflect_dependents(parts)
        .into_iter()
        .flat_map(Part::into_inner)
        .collect();
    Some((start, region))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sentence::{Head, Token};

    #[test]
    fn pair_names_round_trip() {
        for pair in CorrelationPair::ALL {
            assert_eq!(pair.name().parse::<CorrelationPair>().unwrap(), pair);
        }
        assert_eq!("Adp,NP".parse::<CorrelationPair>().unwrap(), CorrelationPair::AdpositionNounPhrase);
        assert!("xyz".parse::<CorrelationPair>().is_err());
        assert_eq!("ja".parse::<Language>().unwrap(), Language::Japanese);
    }

    #[test]
    fn noop_policy_leaves_sentence_alone() {
        let s = Sentence::new(vec![
            Token::new(1, "cats", "NOUN", Head::Token(TokenId(2)), "obj"),
            Token::new(2, "like", "VERB", Head::Root, "root"),
        ]);
        for pair in CorrelationPair::ALL {
            let (out, records) = swap_sentence(&s, pair, &NoopPolicy::default()).unwrap();
            assert_eq!(out, s);
            assert!(records.is_empty());
        }
    }

    #[test]
    fn invalid_tree_is_an_error() {
        let s = Sentence::new(vec![
            Token::new(1, "a", "X", Head::Root, "root"),
            Token::new(2, "b", "X", Head::Root, "root"),
        ]);
        assert!(matches!(
            swap_sentence(&s, CorrelationPair::VerbObject, &NoopPolicy::default()),
            Err(SwapError::InvalidTree(_))
        ));
    }

    #[test]
    fn empty_sentence() {
        let (out, records) = swap_sentence(
            &Sentence::default(),
            CorrelationPair::VerbObject,
            &NoopPolicy::default(),
        )
        .unwrap();
        assert!(out.is_empty() && records.is_empty());
    }
}
