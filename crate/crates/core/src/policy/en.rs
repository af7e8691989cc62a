use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{is_copula_head, is_nominal, noun_span, with_aux, LIFTED_COP};
use crate::swap::{CorrelationPair, Decision, Language, SwapPolicy, UnknownName};
use crate::tree::{DepTree, Node};

/// How far the set of object-like verb dependents extends. Each level
/// accepts everything the tighter levels accept.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectTightness {
    /// Direct objects and copular predicates only.
    VeryTight,
    /// Adds indirect objects.
    Tight,
    /// Adds open and non-finite clausal complements.
    Medium,
    /// Adds obliques and expletives.
    #[default]
    Loose,
    /// Adds finite clausal complements.
    VeryLoose,
}

impl ObjectTightness {
    /// The tightest level at which a `<V, O>` arc is accepted, or `None` if
    /// the relation is never object-like.
    pub fn level_of(tree: &DepTree<'_>, child: Node) -> Option<ObjectTightness> {
        use ObjectTightness::*;
        Some(match tree.token(child).base_rel() {
            "obj" | LIFTED_COP => VeryTight,
            "iobj" => Tight,
            "xcomp" => Medium,
            "ccomp" if tree.has_child_rel(child, "nsubj") => VeryLoose,
            "ccomp" => Medium,
            "obl" | "expl" => Loose,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            ObjectTightness::VeryTight => "very-tight",
            ObjectTightness::Tight => "tight",
            ObjectTightness::Medium => "medium",
            ObjectTightness::Loose => "loose",
            ObjectTightness::VeryLoose => "very-loose",
        }
    }
}

impl fmt::Display for ObjectTightness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ObjectTightness {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "very-tight" => Ok(ObjectTightness::VeryTight),
            "tight" => Ok(ObjectTightness::Tight),
            "medium" => Ok(ObjectTightness::Medium),
            "loose" => Ok(ObjectTightness::Loose),
            "very-loose" => Ok(ObjectTightness::VeryLoose),
            _ => Err(UnknownName(s.into())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnglishPolicy {
    pub object_tightness: ObjectTightness,
    pub vo_include_copula: bool,
}

impl Default for EnglishPolicy {
    fn default() -> Self {
        EnglishPolicy {
            object_tightness: ObjectTightness::default(),
            vo_include_copula: true,
        }
    }
}

fn has_of_between(tree: &DepTree<'_>, noun: Node, genitive: Node) -> bool {
    let (a, b) = (tree.position(noun), tree.position(genitive));
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    tree.children_with_rel(genitive, "case").any(|c| {
        let p = tree.position(c);
        p > lo && p < hi && tree.token(c).form.eq_ignore_ascii_case("of")
    })
}

/// Everything in the verb's subtree that is contiguous with it once the
/// auxiliaries are taken out.
fn verb_phrase(tree: &DepTree<'_>, verb: Node, auxes: &[Node]) -> Vec<Node> {
    let mut excluded = alloc::vec![false; tree.len()];
    for &a in auxes {
        for n in tree.subtree(a) {
            excluded[n] = true;
        }
    }
    let mut inside = alloc::vec![false; tree.len()];
    for n in tree.subtree(verb) {
        inside[n] = !excluded[n];
    }
    let ok = |p: usize| inside[tree.node_at(p)];
    let here = tree.position(verb);
    let mut first = here;
    while first > 0 && ok(first - 1) {
        first -= 1;
    }
    let mut last = here;
    while last + 1 < tree.len() && ok(last + 1) {
        last += 1;
    }
    (first..=last).map(|p| tree.node_at(p)).collect()
}

impl SwapPolicy for EnglishPolicy {
    fn language(&self) -> Language {
        Language::English
    }

    fn is_anchor(&self, pair: CorrelationPair, tree: &DepTree<'_>, node: Node) -> bool {
        let upos = tree.token(node).upos.as_str();
        match pair {
            CorrelationPair::VerbObject => upos == "VERB" || is_copula_head(tree, node),
            CorrelationPair::AdpositionNounPhrase | CorrelationPair::NounGenitive => {
                is_nominal(upos)
            }
            CorrelationPair::CopulaPredicate => is_copula_head(tree, node),
            CorrelationPair::AuxiliaryVerb => tree.has_child_rel(node, "aux"),
        }
    }

    fn classify(
        &self,
        pair: CorrelationPair,
        tree: &DepTree<'_>,
        node: Node,
        child: Node,
    ) -> Decision {
        let token = tree.token(child);
        let rel = token.base_rel();
        match pair {
            CorrelationPair::VerbObject => {
                if rel == LIFTED_COP && !self.vo_include_copula {
                    return Decision::NotPair;
                }
                match ObjectTightness::level_of(tree, child) {
                    None => Decision::NotPair,
                    Some(level) if level <= self.object_tightness => Decision::Accept,
                    Some(_) => Decision::Exclude,
                }
            }
            CorrelationPair::AdpositionNounPhrase => {
                if rel == "case" && token.upos == "ADP" {
                    Decision::Accept
                } else {
                    Decision::NotPair
                }
            }
            CorrelationPair::CopulaPredicate => {
                if rel == LIFTED_COP {
                    Decision::Accept
                } else {
                    Decision::NotPair
                }
            }
            CorrelationPair::AuxiliaryVerb => {
                if rel == "aux" {
                    Decision::Accept
                } else {
                    Decision::NotPair
                }
            }
            CorrelationPair::NounGenitive => {
                if rel != "nmod" {
                    Decision::NotPair
                } else if has_of_between(tree, node, child) {
                    Decision::Accept
                } else if token.deprel.ends_with(":poss") {
                    Decision::Exclude
                } else {
                    Decision::NotPair
                }
            }
        }
    }

    fn anchor_span(
        &self,
        pair: CorrelationPair,
        tree: &DepTree<'_>,
        node: Node,
        movers: &[Node],
    ) -> Vec<Node> {
        match pair {
            CorrelationPair::VerbObject | CorrelationPair::CopulaPredicate => with_aux(tree, node),
            CorrelationPair::AdpositionNounPhrase => {
                let mut moving = alloc::vec![false; tree.len()];
                for &m in movers {
                    for n in tree.subtree(m) {
                        moving[n] = true;
                    }
                }
                tree.subtree(node).into_iter().filter(|&n| !moving[n]).collect()
            }
            CorrelationPair::AuxiliaryVerb => verb_phrase(tree, node, movers),
            CorrelationPair::NounGenitive => noun_span(tree, node, movers),
        }
    }
}
