//! Dependency-parsed sentences with stable token identities.
//!
//! Token ids are assigned once (normally from the CoNLL-U `ID` column) and
//! never change afterwards. Transforms only permute the surface order of the
//! token vector; heads keep pointing at stable ids, so the tree survives any
//! number of reorderings untouched.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

/// Stable token identifier, unique within a sentence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TokenId(pub u32);

impl fmt::Display for TokenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Governor of a token.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Head {
    Root,
    Token(TokenId),
}

/// Ordered `key[=value]` list, as used by the FEATS and MISC columns and by
/// sentence comments.
pub type Attributes = Vec<(String, Option<String>)>;

/// The relation label without its subtype, e.g. `nsubj` for `nsubj:pass`.
pub fn base_relation(deprel: &str) -> &str {
    deprel.split(':').next().unwrap_or(deprel)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub id: TokenId,
    pub form: String,
    pub lemma: String,
    pub upos: String,
    pub xpos: Option<String>,
    pub feats: Attributes,
    pub head: Head,
    pub deprel: String,
    /// Enhanced dependencies, carried through verbatim.
    pub deps: Option<String>,
    pub misc: Attributes,
}

impl Token {
    /// A token with empty annotation apart from the given fields.
    pub fn new(id: u32, form: &str, upos: &str, head: Head, deprel: &str) -> Self {
        Token {
            id: TokenId(id),
            form: form.into(),
            lemma: form.into(),
            upos: upos.into(),
            xpos: None,
            feats: Vec::new(),
            head,
            deprel: deprel.into(),
            deps: None,
            misc: Vec::new(),
        }
    }

    pub fn with_lemma(mut self, lemma: &str) -> Self {
        self.lemma = lemma.into();
        self
    }

    pub fn base_rel(&self) -> &str {
        base_relation(&self.deprel)
    }

    pub fn head_id(&self) -> Option<TokenId> {
        match self.head {
            Head::Root => None,
            Head::Token(id) => Some(id),
        }
    }
}

/// A structural problem found by [`validate_tree`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoRoot,
    MultipleRoots(Vec<TokenId>),
    DuplicateId(TokenId),
    DanglingHead { token: TokenId, head: TokenId },
    /// Members of one head cycle, in surface order.
    Cycle(Vec<TokenId>),
    EmptyForm(TokenId),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoRoot => write!(f, "no root token"),
            Violation::MultipleRoots(ids) => write!(f, "{} root tokens", ids.len()),
            Violation::DuplicateId(id) => write!(f, "duplicate token id {id}"),
            Violation::DanglingHead { token, head } => {
                write!(f, "token {token} points to missing head {head}")
            }
            Violation::Cycle(ids) => write!(f, "head cycle through {} tokens", ids.len()),
            Violation::EmptyForm(id) => write!(f, "token {id} has an empty form"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Sentence {
    tokens: Vec<Token>,
    /// Comment lines in file order (`# key = value`).
    pub meta: Attributes,
}

impl Sentence {
    /// Tokens must be given in surface order.
    pub fn new(tokens: Vec<Token>) -> Self {
        Sentence {
            tokens,
            meta: Vec::new(),
        }
    }

    pub fn with_meta(tokens: Vec<Token>, meta: Attributes) -> Self {
        Sentence { tokens, meta }
    }

    /// Tokens in surface order.
    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    /// Mutable access to token annotation. Ids and heads must stay consistent.
    pub fn tokens_mut(&mut self) -> &mut [Token] {
        &mut self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn position(&self, id: TokenId) -> Option<usize> {
        self.tokens.iter().position(|t| t.id == id)
    }

    pub fn token(&self, id: TokenId) -> Option<&Token> {
        self.tokens.iter().find(|t| t.id == id)
    }

    pub fn root(&self) -> Option<TokenId> {
        self.tokens
            .iter()
            .find(|t| t.head == Head::Root)
            .map(|t| t.id)
    }

    pub fn forms(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.form.as_str()).collect()
    }

    pub fn ids(&self) -> Vec<TokenId> {
        self.tokens.iter().map(|t| t.id).collect()
    }

    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta
            .iter()
            .find(|(k, _)| k == key)
            .and_then(|(_, v)| v.as_deref())
    }

    /// Replaces the value of an existing comment key, or appends one.
    pub fn set_meta(&mut self, key: &str, value: String) {
        match self.meta.iter_mut().find(|(k, _)| k == key) {
            Some(entry) => entry.1 = Some(value),
            None => self.meta.push((key.into(), Some(value))),
        }
    }

    pub fn sent_id(&self) -> Option<&str> {
        self.meta_value("sent_id")
    }

    pub fn validate(&self) -> Vec<Violation> {
        validate_tree(self)
    }

    /// Permutes tokens so that `order[i]` (an index into the current token
    /// vector) ends up at position `i`.
    pub(crate) fn permute(&mut self, order: &[usize]) {
        debug_assert_eq!(order.len(), self.tokens.len());
        let mut slots: Vec<Option<Token>> = self.tokens.drain(..).map(Some).collect();
        self.tokens = order
            .iter()
            .map(|&i| slots[i].take().expect("order is a permutation"))
            .collect();
    }
}

/// Checks the single-root tree invariants. Returns an empty list iff the
/// sentence is a well-formed dependency tree.
pub fn validate_tree(sentence: &Sentence) -> Vec<Violation> {
    let tokens = sentence.tokens();
    let mut violations = Vec::new();

    let mut sorted: Vec<(TokenId, usize)> =
        tokens.iter().enumerate().map(|(i, t)| (t.id, i)).collect();
    sorted.sort_unstable();
    for pair in sorted.windows(2) {
        if pair[0].0 == pair[1].0 {
            violations.push(Violation::DuplicateId(pair[0].0));
        }
    }
    let index_of = |id: TokenId| -> Option<usize> {
        sorted
            .binary_search_by(|probe| probe.0.cmp(&id))
            .ok()
            .map(|i| sorted[i].1)
    };

    for t in tokens {
        if t.form.is_empty() {
            violations.push(Violation::EmptyForm(t.id));
        }
    }

    let roots: Vec<TokenId> = tokens
        .iter()
        .filter(|t| t.head == Head::Root)
        .map(|t| t.id)
        .collect();
    if roots.is_empty() && !tokens.is_empty() {
        violations.push(Violation::NoRoot);
    } else if roots.len() > 1 {
        violations.push(Violation::MultipleRoots(roots));
    }

    let mut parent: Vec<Option<usize>> = vec![None; tokens.len()];
    for (i, t) in tokens.iter().enumerate() {
        if let Head::Token(h) = t.head {
            match index_of(h) {
                Some(p) => parent[i] = Some(p),
                None => violations.push(Violation::DanglingHead {
                    token: t.id,
                    head: h,
                }),
            }
        }
    }

    // 0 = unvisited, 1 = on the current path, 2 = known to reach a root.
    let mut state = vec![0u8; tokens.len()];
    for start in 0..tokens.len() {
        let mut path = Vec::new();
        let mut cur = Some(start);
        while let Some(i) = cur {
            match state[i] {
                2 => break,
                1 => {
                    let from = path.iter().position(|&p| p == i).unwrap_or(0);
                    let mut cycle: Vec<usize> = path[from..].to_vec();
                    cycle.sort_unstable();
                    violations.push(Violation::Cycle(
                        cycle.into_iter().map(|j| tokens[j].id).collect(),
                    ));
                    break;
                }
                _ => {
                    state[i] = 1;
                    path.push(i);
                    cur = parent[i];
                }
            }
        }
        for i in path {
            state[i] = 2;
        }
    }

    violations
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_tokens() -> Sentence {
        Sentence::new(vec![
            Token::new(1, "the", "DET", Head::Token(TokenId(2)), "det"),
            Token::new(2, "cat", "NOUN", Head::Root, "root"),
        ])
    }

    #[test]
    fn valid_tree_has_no_violations() {
        assert!(validate_tree(&two_tokens()).is_empty());
        assert!(validate_tree(&Sentence::default()).is_empty());
    }

    #[test]
    fn two_roots() {
        let mut s = two_tokens();
        s.tokens_mut()[0].head = Head::Root;
        assert_eq!(
            validate_tree(&s),
            vec![Violation::MultipleRoots(vec![TokenId(1), TokenId(2)])]
        );
    }

    #[test]
    fn head_cycle() {
        let s = Sentence::new(vec![
            Token::new(1, "a", "X", Head::Token(TokenId(2)), "dep"),
            Token::new(2, "b", "X", Head::Token(TokenId(1)), "dep"),
            Token::new(3, "c", "X", Head::Root, "root"),
        ]);
        assert_eq!(
            validate_tree(&s),
            vec![Violation::Cycle(vec![TokenId(1), TokenId(2)])]
        );
    }

    #[test]
    fn dangling_and_duplicate() {
        let s = Sentence::new(vec![
            Token::new(1, "a", "X", Head::Token(TokenId(9)), "dep"),
            Token::new(1, "b", "X", Head::Root, "root"),
        ]);
        let v = validate_tree(&s);
        assert!(v.contains(&Violation::DuplicateId(TokenId(1))));
        assert!(v.contains(&Violation::DanglingHead {
            token: TokenId(1),
            head: TokenId(9)
        }));
    }

    #[test]
    fn subtype_is_stripped() {
        assert_eq!(base_relation("nsubj:pass"), "nsubj");
        assert_eq!(base_relation("cop*"), "cop*");
        assert_eq!(base_relation("obl"), "obl");
    }

    #[test]
    fn permute_reorders_without_touching_heads() {
        let mut s = two_tokens();
        s.permute(&[1, 0]);
        assert_eq!(s.forms(), vec!["cat", "the"]);
        assert_eq!(s.tokens()[1].head, Head::Token(TokenId(2)));
        assert!(validate_tree(&s).is_empty());
    }
}
