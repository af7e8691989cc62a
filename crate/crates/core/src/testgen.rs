//! Random projective trees for property tests and benchmarks.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::sentence::{Head, Sentence, Token, TokenId};
use crate::swap::Language;

/// Head position (or `None` for the root) of every position in a random
/// projective tree over `len` tokens.
pub fn projective_heads<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<Option<usize>> {
    let mut heads = vec![None; len];
    if len > 0 {
        fill(rng, 0, len, None, &mut heads);
    }
    heads
}

fn fill<R: Rng + ?Sized>(
    rng: &mut R,
    lo: usize,
    hi: usize,
    parent: Option<usize>,
    heads: &mut [Option<usize>],
) {
    let h = rng.random_range(lo..hi);
    heads[h] = parent;
    let mut s = lo;
    while s < h {
        let e = rng.random_range(s + 1..=h);
        fill(rng, s, e, Some(h), heads);
        s = e;
    }
    let mut s = h + 1;
    while s < hi {
        let e = rng.random_range(s + 1..=hi);
        fill(rng, s, e, Some(h), heads);
        s = e;
    }
}

const RELS: [&str; 20] = [
    "obj", "iobj", "obl", "xcomp", "ccomp", "expl", "nsubj", "case", "case", "aux", "nmod",
    "nmod", "det", "amod", "advmod", "conj", "cc", "mark", "cop*", "compound",
];
const CONTENT: [&str; 6] = ["NOUN", "VERB", "PROPN", "PRON", "ADJ", "NUM"];

fn form_for(language: Language, upos: &str, i: usize) -> alloc::string::String {
    let pick = |en: &[&str], ja: &[&str]| -> alloc::string::String {
        let list = if language == Language::English { en } else { ja };
        list[i % list.len()].into()
    };
    match upos {
        "ADP" => pick(&["of", "to", "from", "in"], &["no", "ga", "wa", "wo", "ni", "kara"]),
        "AUX" => pick(&["is", "has", "will"], &["teiru", "ta", "dearu"]),
        "DET" => pick(&["the", "a"], &["kono"]),
        _ => format!("w{i}"),
    }
}

/// A random projective sentence with labels drawn so that every policy
/// finds something to do.
pub fn random_sentence<R: Rng + ?Sized>(rng: &mut R, len: usize, language: Language) -> Sentence {
    let heads = projective_heads(rng, len);
    let tokens = heads
        .iter()
        .enumerate()
        .map(|(i, head)| {
            let (head, rel) = match head {
                None => (Head::Root, "root"),
                Some(h) => (Head::Token(TokenId(*h as u32 + 1)), *RELS.choose(rng).unwrap()),
            };
            let upos = match rel {
                "case" => "ADP",
                "aux" => "AUX",
                "det" => "DET",
                "cc" => "CCONJ",
                "mark" => "SCONJ",
                _ => *CONTENT.choose(rng).unwrap(),
            };
            Token::new(i as u32 + 1, &form_for(language, upos, i), upos, head, rel)
        })
        .collect();
    Sentence::new(tokens)
}

/// A random projective sentence in which the only `<V, O>` instance is one
/// verb with one `obj` dependent. Returns the sentence with the head and
/// dependent ids.
pub fn single_object_sentence<R: Rng + ?Sized>(
    rng: &mut R,
    len: usize,
) -> (Sentence, TokenId, TokenId) {
    assert!(len >= 2);
    let heads = projective_heads(rng, len);
    let arcs: Vec<(usize, usize)> = heads
        .iter()
        .enumerate()
        .filter_map(|(d, h)| h.map(|h| (h, d)))
        .collect();
    let &(verb, object) = arcs.choose(rng).unwrap();
    let tokens = heads
        .iter()
        .enumerate()
        .map(|(i, head)| {
            let head = match head {
                None => Head::Root,
                Some(h) => Head::Token(TokenId(*h as u32 + 1)),
            };
            let (upos, rel) = if i == verb {
                ("VERB", if head == Head::Root { "root" } else { "dep" })
            } else if i == object {
                ("NOUN", "obj")
            } else {
                ("X", if head == Head::Root { "root" } else { "dep" })
            };
            Token::new(i as u32 + 1, &format!("w{i}"), upos, head, rel)
        })
        .collect();
    (
        Sentence::new(tokens),
        TokenId(verb as u32 + 1),
        TokenId(object as u32 + 1),
    )
}

/// Moves the dependent's block to the other side of the head, immediately
/// adjacent to it. Material between head and dependent stays after (or
/// before) the head as before.
pub fn splice_oracle(sentence: &Sentence, head: TokenId, dep: TokenId) -> Vec<TokenId> {
    let ids = sentence.ids();
    let mut block = vec![false; ids.len()];
    for (i, t) in sentence.tokens().iter().enumerate() {
        let mut cur = Some(t.id);
        while let Some(c) = cur {
            if c == dep {
                block[i] = true;
                break;
            }
            cur = sentence.token(c).and_then(|t| t.head_id());
        }
    }
    let moved: Vec<TokenId> = (0..ids.len()).filter(|&i| block[i]).map(|i| ids[i]).collect();
    let rest: Vec<TokenId> = (0..ids.len()).filter(|&i| !block[i]).map(|i| ids[i]).collect();
    let dep_after = sentence.position(dep) > sentence.position(head);
    let h = rest.iter().position(|&id| id == head).unwrap();
    let at = if dep_after { h } else { h + 1 };
    let mut out = rest[..at].to_vec();
    out.extend(moved);
    out.extend_from_slice(&rest[at..]);
    out
}
