//! Language policies binding the five correlation pairs to UD arcs.

mod en;
mod ja;

use alloc::boxed::Box;
use alloc::vec::Vec;

pub use en::{EnglishPolicy, ObjectTightness};
pub use ja::{ja_argument_class, ja_nominalized, ja_verbalize_sahen, ArgumentClass, JaLexicons, JapanesePolicy};

use crate::swap::{Language, SwapPolicy};
use crate::tree::{DepTree, Node};

/// Relation of a lifted copula's predicate.
pub const LIFTED_COP: &str = "cop*";

/// Options shared by the policy constructors.
#[derive(Clone, Debug, PartialEq)]
pub struct PolicyOptions {
    pub object_tightness: ObjectTightness,
    /// Treat the lifted `cop*` arc as a `<V, O>` instance.
    pub vo_include_copula: bool,
    pub lexicons: JaLexicons,
}

impl Default for PolicyOptions {
    fn default() -> Self {
        PolicyOptions {
            object_tightness: ObjectTightness::default(),
            vo_include_copula: true,
            lexicons: JaLexicons::default(),
        }
    }
}

pub fn policy_for(language: Language, options: &PolicyOptions) -> Box<dyn SwapPolicy> {
    match language {
        Language::English => Box::new(EnglishPolicy {
            object_tightness: options.object_tightness,
            vo_include_copula: options.vo_include_copula,
        }),
        Language::Japanese => Box::new(JapanesePolicy {
            lexicons: options.lexicons.clone(),
            vo_include_copula: options.vo_include_copula,
        }),
    }
}

pub(crate) fn is_nominal(upos: &str) -> bool {
    matches!(upos, "NOUN" | "PROPN" | "NUM" | "PRON")
}

pub(crate) fn is_copula_head(tree: &DepTree<'_>, node: Node) -> bool {
    tree.has_child_rel(node, LIFTED_COP)
}

/// The node plus its `aux` children.
pub(crate) fn with_aux(tree: &DepTree<'_>, node: Node) -> Vec<Node> {
    let mut out: Vec<Node> = tree.children_with_rel(node, "aux").collect();
    out.push(node);
    out
}

/// Noun span used for `<Noun, Genitive>`: the noun, its `nummod`,
/// `compound`, `appos` and `flat` children on sides without a genitive, and
/// every child lying between the noun and the nearest genitive.
pub(crate) fn noun_span(tree: &DepTree<'_>, node: Node, genitives: &[Node]) -> Vec<Node> {
    let here = tree.position(node);
    let nearest_left = genitives
        .iter()
        .map(|&g| tree.position(g))
        .filter(|&p| p < here)
        .max();
    let nearest_right = genitives
        .iter()
        .map(|&g| tree.position(g))
        .filter(|&p| p > here)
        .min();

    let mut out = alloc::vec![node];
    for &child in tree.children(node) {
        if genitives.contains(&child) {
            continue;
        }
        let p = tree.position(child);
        let keep = if p < here {
            match nearest_left {
                Some(g) => p > g,
                None => noun_modifier(tree, child),
            }
        } else {
            match nearest_right {
                Some(g) => p < g,
                None => noun_modifier(tree, child),
            }
        };
        if keep {
            out.extend(tree.subtree(child));
        }
    }
    out
}

fn noun_modifier(tree: &DepTree<'_>, child: Node) -> bool {
    matches!(
        tree.token(child).base_rel(),
        "nummod" | "compound" | "appos" | "flat"
    )
}
