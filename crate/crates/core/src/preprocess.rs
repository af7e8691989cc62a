//! Corpus cleanup applied before swapping, and copula lifting.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::policy::{JaLexicons, LIFTED_COP};
use crate::sentence::{Head, Sentence, TokenId};
use crate::swap::Language;
use crate::tree::{DepTree, Node};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreprocessConfig {
    pub language: Language,
    pub lowercase: bool,
    pub remove_punct: bool,
    /// Drop bracket pairs together with their content.
    pub remove_bracketed: bool,
    /// Drop sentences containing a token with a lowercase Latin letter.
    pub drop_latin_sentences: bool,
}

impl PreprocessConfig {
    pub fn for_language(language: Language) -> Self {
        let ja = language == Language::Japanese;
        PreprocessConfig {
            language,
            lowercase: !ja,
            remove_punct: true,
            remove_bracketed: ja,
            drop_latin_sentences: ja,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DropReason {
    LatinScript,
    Empty,
    InvalidTree,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PreprocessWarning {
    UnmatchedBracket(TokenId),
    /// A predicate with several copulas; only the first was lifted.
    MultipleCopulas { predicate: TokenId },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preprocessed {
    Kept {
        sentence: Sentence,
        warnings: Vec<PreprocessWarning>,
    },
    Dropped(DropReason),
}

const BRACKETS: [(&str, &str); 9] = [
    ("「", "」"),
    ("『", "』"),
    ("（", "）"),
    ("(", ")"),
    ("【", "】"),
    ("［", "］"),
    ("[", "]"),
    ("〔", "〕"),
    ("〈", "〉"),
];

fn opener(form: &str) -> Option<usize> {
    BRACKETS.iter().position(|(o, _)| *o == form)
}

fn closer(form: &str) -> Option<usize> {
    BRACKETS.iter().position(|(_, c)| *c == form)
}

/// Marks bracketed stretches (innermost pairs first) for removal.
fn bracketed(sentence: &Sentence, removed: &mut [bool], warnings: &mut Vec<PreprocessWarning>) {
    let tokens = sentence.tokens();
    let mut open: Vec<(usize, usize)> = Vec::new();
    for (i, t) in tokens.iter().enumerate() {
        if let Some(kind) = opener(&t.form) {
            open.push((i, kind));
        } else if let Some(kind) = closer(&t.form) {
            match open.last() {
                Some(&(start, k)) if k == kind => {
                    open.pop();
                    removed[start..=i].iter_mut().for_each(|r| *r = true);
                }
                _ => {
                    removed[i] = true;
                    warnings.push(PreprocessWarning::UnmatchedBracket(t.id));
                }
            }
        }
    }
    for (i, _) in open {
        removed[i] = true;
        warnings.push(PreprocessWarning::UnmatchedBracket(tokens[i].id));
    }
}

/// Removes the flagged tokens, re-attaching orphans to their nearest kept
/// ancestor. If the root goes, the first orphan without a kept ancestor
/// becomes the new root and the other such orphans attach to it.
fn remove_tokens(sentence: &Sentence, removed: &[bool]) -> Sentence {
    let tokens = sentence.tokens();
    let index_of = |id: TokenId| tokens.iter().position(|t| t.id == id);
    let kept_ancestor = |mut i: usize| -> Option<usize> {
        // Bounded walk: input trees are validated, so this terminates.
        for _ in 0..tokens.len() {
            match tokens[i].head {
                Head::Root => return None,
                Head::Token(h) => {
                    i = index_of(h)?;
                    if !removed[i] {
                        return Some(i);
                    }
                }
            }
        }
        None
    };

    let mut out = Vec::new();
    let mut new_root: Option<TokenId> = None;
    for (i, t) in tokens.iter().enumerate() {
        if removed[i] {
            continue;
        }
        let mut t = t.clone();
        let head_removed = match t.head {
            Head::Root => false,
            Head::Token(h) => index_of(h).is_none_or(|j| removed[j]),
        };
        if head_removed {
            match kept_ancestor(i) {
                Some(a) => t.head = Head::Token(tokens[a].id),
                None => match new_root {
                    Some(r) => t.head = Head::Token(r),
                    None => {
                        new_root = Some(t.id);
                        t.head = Head::Root;
                        t.deprel = "root".into();
                    }
                },
            }
        }
        out.push(t);
    }
    Sentence::with_meta(out, sentence.meta.clone())
}

/// Forms joined the way the language writes them.
pub fn surface_text(sentence: &Sentence, language: Language) -> String {
    let sep = if language == Language::Japanese { "" } else { " " };
    sentence.forms().join(sep)
}

/// Applies the configured cleanup steps. The result is always a valid
/// tree; inputs that are not valid trees are dropped.
pub fn preprocess_sentence(sentence: &Sentence, config: &PreprocessConfig) -> Preprocessed {
    if !sentence.validate().is_empty() {
        return Preprocessed::Dropped(DropReason::InvalidTree);
    }
    let mut warnings = Vec::new();
    let mut removed = vec![false; sentence.len()];
    if config.remove_bracketed {
        bracketed(sentence, &mut removed, &mut warnings);
    }
    if config.remove_punct {
        for (i, t) in sentence.tokens().iter().enumerate() {
            removed[i] |= t.upos == "PUNCT";
        }
    }

    let mut out = if removed.iter().any(|&r| r) {
        remove_tokens(sentence, &removed)
    } else {
        sentence.clone()
    };
    if out.is_empty() {
        return Preprocessed::Dropped(DropReason::Empty);
    }
    if config.drop_latin_sentences
        && out
            .tokens()
            .iter()
            .any(|t| t.form.chars().any(|c| c.is_ascii_lowercase()))
    {
        return Preprocessed::Dropped(DropReason::LatinScript);
    }
    if config.lowercase {
        for t in out.tokens_mut() {
            if t.form.chars().any(char::is_uppercase) {
                t.form = t.form.to_lowercase();
            }
        }
    }
    if out.meta_value("text").is_some() {
        let text = surface_text(&out, config.language);
        out.set_meta("text", text);
    }
    debug_assert!(out.validate().is_empty());
    Preprocessed::Kept {
        sentence: out,
        warnings,
    }
}

const TRANSFERRED: [&str; 5] = ["nsubj", "csubj", "expl", "mark", "aux"];

fn copula_child(
    tree: &DepTree<'_>,
    language: Language,
    lexicons: &JaLexicons,
    node: Node,
) -> bool {
    match language {
        Language::English => tree.token(node).base_rel() == "cop",
        Language::Japanese => {
            lexicons.is_copula(tree, node)
                && tree
                    .parent(node)
                    .is_some_and(|p| tree.has_child_rel(p, "nsubj"))
        }
    }
}

/// Reverses copula arcs so that the copula governs its predicate via
/// `cop*`. The copula takes over the predicate's attachment, along with the
/// predicate's subject, expletive, marker and auxiliary dependents that lie
/// outside the stretch between copula and predicate.
///
/// Only head and relation fields change; surface order is untouched.
pub fn lift_copula(
    sentence: &Sentence,
    language: Language,
    lexicons: &JaLexicons,
) -> (Sentence, Vec<PreprocessWarning>) {
    let mut warnings = Vec::new();
    let Ok(tree) = DepTree::new(sentence) else {
        return (sentence.clone(), warnings);
    };

    let mut lifts: Vec<(Node, Node)> = Vec::new();
    for pred in 0..tree.len() {
        let cops: Vec<Node> = tree
            .children_by_position(pred)
            .into_iter()
            .filter(|&c| copula_child(&tree, language, lexicons, c))
            .collect();
        if let Some(&first) = cops.first() {
            if cops.len() > 1 {
                warnings.push(PreprocessWarning::MultipleCopulas {
                    predicate: tree.id(pred),
                });
            }
            lifts.push((pred, first));
        }
    }
    if lifts.is_empty() {
        return (sentence.clone(), warnings);
    }
    let copulas: Vec<Node> = lifts.iter().map(|&(_, c)| c).collect();

    let mut heads: Vec<Head> = sentence.tokens().iter().map(|t| t.head).collect();
    let mut rels: Vec<String> = sentence.tokens().iter().map(|t| t.deprel.clone()).collect();
    for &(pred, cop) in &lifts {
        if copulas.contains(&pred) {
            continue;
        }
        let (pp, pc) = (tree.position(pred), tree.position(cop));
        let (lo, hi) = if pp < pc { (pp, pc) } else { (pc, pp) };
        heads[cop] = heads[pred];
        rels[cop] = rels[pred].clone();
        heads[pred] = Head::Token(tree.id(cop));
        rels[pred] = LIFTED_COP.into();
        for &child in tree.children(pred) {
            let p = tree.position(child);
            if child != cop
                && !copulas.contains(&child)
                && (p < lo || p > hi)
                && TRANSFERRED.contains(&tree.token(child).base_rel())
            {
                heads[child] = Head::Token(tree.id(cop));
            }
        }
    }

    let mut out = sentence.clone();
    for (i, t) in out.tokens_mut().iter_mut().enumerate() {
        t.head = heads[i];
        core::mem::swap(&mut t.deprel, &mut rels[i]);
    }
    if !out.validate().is_empty() {
        return (sentence.clone(), warnings);
    }
    (out, warnings)
}
