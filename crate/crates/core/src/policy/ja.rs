use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{is_copula_head, is_nominal, noun_span, with_aux, LIFTED_COP};
use crate::swap::{CorrelationPair, Decision, Language, SwapPolicy};
use crate::tree::{DepTree, Node};

/// Word lists driving the Japanese rules. Entries are matched against the
/// surface form and the lemma; each default list carries both romanized and
/// kana spellings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct JaLexicons {
    pub version: u32,
    /// Auxiliaries that head a copular construction.
    pub copula_aux: Vec<String>,
    /// Verbs (existence, becoming) that head a copular construction.
    pub copula_verb: Vec<String>,
    pub genitive_particles: Vec<String>,
    pub topic_particles: Vec<String>,
    pub nominative_particles: Vec<String>,
    /// `no` used as a nominalizer (a `mark` child tagged SCONJ).
    pub nominalizers: Vec<String>,
    /// Head nouns of the `X-no yō na` expression.
    pub yo_heads: Vec<String>,
    pub na_forms: Vec<String>,
}

fn words(list: &[&str]) -> Vec<String> {
    list.iter().map(|w| w.to_string()).collect()
}

impl Default for JaLexicons {
    fn default() -> Self {
        JaLexicons {
            version: 1,
            copula_aux: words(&[
                "dearu", "denai", "dewanai", "janai", "rashii", "kamoshirenai", "desu",
                "である", "でない", "ではない", "じゃない", "らしい", "かもしれない", "です",
            ]),
            copula_verb: words(&["iru", "aru", "naru", "いる", "ある", "なる"]),
            genitive_particles: words(&["no", "ga", "tsu", "の", "が", "つ"]),
            topic_particles: words(&["wa", "は"]),
            nominative_particles: words(&["ga", "が"]),
            nominalizers: words(&["no", "の"]),
            yo_heads: words(&["yō", "you", "yo", "よう", "様"]),
            na_forms: words(&["na", "な"]),
        }
    }
}

impl JaLexicons {
    fn has(list: &[String], tree: &DepTree<'_>, node: Node) -> bool {
        let t = tree.token(node);
        list.iter().any(|w| *w == t.form || *w == t.lemma)
    }

    fn has_form(list: &[String], tree: &DepTree<'_>, node: Node) -> bool {
        let form = &tree.token(node).form;
        list.iter().any(|w| w == form)
    }

    /// Whether `node` heads a copula construction that should be lifted
    /// over its predicate.
    pub fn is_copula(&self, tree: &DepTree<'_>, node: Node) -> bool {
        let t = tree.token(node);
        match t.base_rel() {
            "cop" => true,
            "aux" => match t.upos.as_str() {
                "AUX" => Self::has(&self.copula_aux, tree, node),
                "VERB" => {
                    let lemma = &t.lemma;
                    self.copula_verb.iter().any(|w| w == lemma)
                }
                _ => false,
            },
            _ => false,
        }
    }
}

/// Role of an argument-bearing dependent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArgumentClass {
    Subject,
    Topic,
    Object,
}

const ARGUMENT_RELS: [&str; 8] = ["nsubj", "obj", "iobj", "obl", "cop", LIFTED_COP, "expl", "xcomp"];

fn particle_children<'t>(tree: &'t DepTree<'_>, node: Node) -> impl Iterator<Item = Node> + 't {
    tree.children(node)
        .iter()
        .copied()
        .filter(move |&c| matches!(tree.token(c).base_rel(), "case" | "mark"))
}

/// Topic marking wins over nominative marking; anything else is treated as
/// an object.
pub fn ja_argument_class(lex: &JaLexicons, tree: &DepTree<'_>, node: Node) -> ArgumentClass {
    if particle_children(tree, node).any(|c| JaLexicons::has_form(&lex.topic_particles, tree, c)) {
        return ArgumentClass::Topic;
    }
    if tree.token(node).base_rel() == "nsubj"
        && particle_children(tree, node)
            .any(|c| JaLexicons::has_form(&lex.nominative_particles, tree, c))
    {
        return ArgumentClass::Subject;
    }
    ArgumentClass::Object
}

/// A sa-hen noun with argument dependents behaves as a verb. Returns the
/// effective UPOS.
pub fn ja_verbalize_sahen<'a>(tree: &DepTree<'a>, node: Node) -> &'a str {
    let t = tree.token(node);
    let verbal = t.upos == "NOUN"
        && tree
            .children(node)
            .iter()
            .any(|&c| ARGUMENT_RELS.contains(&tree.token(c).base_rel()));
    if verbal {
        "VERB"
    } else {
        &t.upos
    }
}

/// A content word nominalized by `no` behaves as a noun.
pub fn ja_nominalized(lex: &JaLexicons, tree: &DepTree<'_>, node: Node) -> bool {
    is_nominal(&tree.token(node).upos) || nominalizer(lex, tree, node).is_some()
}

fn nominalizer(lex: &JaLexicons, tree: &DepTree<'_>, node: Node) -> Option<Node> {
    tree.children_with_rel(node, "mark").find(|&c| {
        tree.token(c).upos == "SCONJ" && JaLexicons::has_form(&lex.nominalizers, tree, c)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JapanesePolicy {
    pub lexicons: JaLexicons,
    pub vo_include_copula: bool,
}

impl Default for JapanesePolicy {
    fn default() -> Self {
        JapanesePolicy {
            lexicons: JaLexicons::default(),
            vo_include_copula: true,
        }
    }
}

impl JapanesePolicy {
    fn genitive_particle(&self, tree: &DepTree<'_>, dep: Node) -> bool {
        tree.children_with_rel(dep, "case")
            .any(|c| JaLexicons::has_form(&self.lexicons.genitive_particles, tree, c))
    }

    fn is_yo_na(&self, tree: &DepTree<'_>, noun: Node) -> bool {
        JaLexicons::has(&self.lexicons.yo_heads, tree, noun)
            && tree
                .children(noun)
                .iter()
                .any(|&c| JaLexicons::has(&self.lexicons.na_forms, tree, c))
    }
}

impl SwapPolicy for JapanesePolicy {
    fn language(&self) -> Language {
        Language::Japanese
    }

    fn is_anchor(&self, pair: CorrelationPair, tree: &DepTree<'_>, node: Node) -> bool {
        match pair {
            CorrelationPair::VerbObject => {
                tree.token(node).upos == "VERB"
                    || ja_verbalize_sahen(tree, node) == "VERB"
                    || is_copula_head(tree, node)
            }
            CorrelationPair::AdpositionNounPhrase | CorrelationPair::NounGenitive => {
                ja_nominalized(&self.lexicons, tree, node)
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
                if !ARGUMENT_RELS.contains(&rel) || (rel == LIFTED_COP && !self.vo_include_copula)
                {
                    return Decision::NotPair;
                }
                match ja_argument_class(&self.lexicons, tree, child) {
                    ArgumentClass::Object => Decision::Accept,
                    ArgumentClass::Subject | ArgumentClass::Topic => Decision::Exclude,
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
                if rel != "nmod" || !self.genitive_particle(tree, child) {
                    Decision::NotPair
                } else if self.is_yo_na(tree, node) {
                    Decision::Exclude
                } else {
                    Decision::Accept
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
        let nominalized = || nominalizer(&self.lexicons, tree, node).into_iter();
        match pair {
            CorrelationPair::VerbObject | CorrelationPair::CopulaPredicate => with_aux(tree, node),
            CorrelationPair::AdpositionNounPhrase => {
                let mut out = alloc::vec![node];
                out.extend(nominalized());
                out
            }
            CorrelationPair::AuxiliaryVerb => alloc::vec![node],
            CorrelationPair::NounGenitive => {
                let mut out = noun_span(tree, node, movers);
                out.extend(nominalized());
                out
            }
        }
    }
}
