//! Worked examples: the strawberry-season sentence in English and Japanese,
//! and the coordination conventions.

use wordorder_core::policy::{EnglishPolicy, JaLexicons, JapanesePolicy};
use wordorder_core::preprocess::{lift_copula, preprocess_sentence, PreprocessConfig, Preprocessed};
use wordorder_core::swap::{identify_pairs, swap_sentence, CorrelationPair, Language, SwapPolicy};
use wordorder_core::{Head, Sentence, Token, TokenId};

use CorrelationPair::*;

fn sentence(rows: &[(&str, &str, u32, &str)]) -> Sentence {
    Sentence::new(
        rows.iter()
            .enumerate()
            .map(|(i, &(form, upos, head, rel))| {
                let head = if head == 0 { Head::Root } else { Head::Token(TokenId(head)) };
                Token::new(i as u32 + 1, form, upos, head, rel)
            })
            .collect(),
    )
}

fn english() -> Sentence {
    sentence(&[
        ("The", "DET", 2, "det"),
        ("fact", "NOUN", 10, "nsubj"),
        ("is", "AUX", 10, "cop"),
        ("that", "SCONJ", 10, "mark"),
        ("the", "DET", 6, "det"),
        ("season", "NOUN", 10, "nsubj"),
        ("of", "ADP", 8, "case"),
        ("strawberries", "NOUN", 6, "nmod"),
        ("is", "AUX", 10, "aux"),
        ("running", "VERB", 0, "root"),
        ("from", "ADP", 12, "case"),
        ("July", "PROPN", 10, "obl"),
        ("to", "ADP", 14, "case"),
        ("August", "PROPN", 10, "obl"),
        (".", "PUNCT", 10, "punct"),
    ])
}

fn japanese() -> Sentence {
    let mut s = sentence(&[
        ("ichigo", "NOUN", 3, "nmod"),
        ("no", "ADP", 1, "case"),
        ("kisetsu", "NOUN", 9, "nsubj"),
        ("ga", "ADP", 3, "case"),
        ("shichigatsu", "NOUN", 9, "obl"),
        ("kara", "ADP", 5, "case"),
        ("hachigatsu", "NOUN", 9, "obl"),
        ("made", "ADP", 7, "case"),
        ("tsudui", "VERB", 11, "acl"),
        ("teiru", "AUX", 9, "aux"),
        ("koto", "NOUN", 13, "nsubj"),
        ("wa", "ADP", 11, "case"),
        ("jijitsu", "NOUN", 0, "root"),
        ("dearu", "AUX", 13, "aux"),
        (".", "PUNCT", 13, "punct"),
    ]);
    s.tokens_mut()[9].lemma = "iru".into();
    s
}

fn prepare(s: &Sentence, config: PreprocessConfig) -> Sentence {
    let Preprocessed::Kept { sentence, .. } = preprocess_sentence(s, &config) else {
        panic!("fixture dropped");
    };
    lift_copula(&sentence, config.language, &JaLexicons::default()).0
}

fn english_ready() -> Sentence {
    prepare(&english(), PreprocessConfig::for_language(Language::English))
}

fn japanese_ready() -> Sentence {
    let config = PreprocessConfig {
        drop_latin_sentences: false,
        ..PreprocessConfig::for_language(Language::Japanese)
    };
    prepare(&japanese(), config)
}

fn run(s: &Sentence, pair: CorrelationPair, policy: &dyn SwapPolicy) -> String {
    swap_sentence(s, pair, policy).unwrap().0.forms().join(" ")
}

fn en_inner_vo() -> EnglishPolicy {
    EnglishPolicy {
        vo_include_copula: false,
        ..EnglishPolicy::default()
    }
}

#[test]
fn english_preprocessing_and_lift() {
    let s = english_ready();
    assert_eq!(
        s.forms().join(" "),
        "the fact is that the season of strawberries is running from july to august"
    );
    assert_eq!(s.root(), Some(TokenId(3)));
    let running = s.token(TokenId(10)).unwrap();
    assert_eq!(running.deprel, "cop*");
    assert_eq!(s.token(TokenId(2)).unwrap().head, Head::Token(TokenId(3)));
}

#[test]
fn english_variants() {
    let s = english_ready();
    let p = EnglishPolicy::default();
    assert_eq!(
        run(&s, AdpositionNounPhrase, &p),
        "the fact is that the season strawberries of is running july from august to"
    );
    assert_eq!(
        run(&s, CopulaPredicate, &p),
        "the fact that the season of strawberries is running from july to august is"
    );
    assert_eq!(
        run(&s, AuxiliaryVerb, &p),
        "the fact is that the season of strawberries running from july to august is"
    );
    assert_eq!(
        run(&s, NounGenitive, &p),
        "the fact is that the of strawberries season is running from july to august"
    );
    assert_eq!(
        run(&s, VerbObject, &en_inner_vo()),
        "the fact is that the season of strawberries to august from july is running"
    );
}

#[test]
fn english_full_vo_includes_outer_copula() {
    assert_eq!(
        run(&english_ready(), VerbObject, &EnglishPolicy::default()),
        "the fact that the season of strawberries to august from july is running is"
    );
}

#[test]
fn english_adp_records() {
    let records = identify_pairs(&english_ready(), AdpositionNounPhrase, &EnglishPolicy::default())
        .unwrap();
    let mut heads: Vec<u32> = records.iter().map(|r| r.head_span.head_id.0).collect();
    heads.sort();
    assert_eq!(heads, vec![7, 11, 13]);
    let vo = identify_pairs(&english_ready(), VerbObject, &en_inner_vo()).unwrap();
    let running = vo.iter().find(|r| r.head_span.head_id == TokenId(10)).unwrap();
    assert_eq!(running.dep_spans.len(), 2);
}

#[test]
fn japanese_variants() {
    let s = japanese_ready();
    let p = JapanesePolicy::default();
    let inner = JapanesePolicy {
        vo_include_copula: false,
        ..JapanesePolicy::default()
    };
    assert_eq!(
        run(&s, VerbObject, &inner),
        "ichigo no kisetsu ga tsudui teiru hachigatsu made shichigatsu kara koto wa jijitsu dearu"
    );
    assert_eq!(
        run(&s, VerbObject, &p),
        "ichigo no kisetsu ga tsudui teiru hachigatsu made shichigatsu kara koto wa dearu jijitsu"
    );
    assert_eq!(
        run(&s, AdpositionNounPhrase, &p),
        "no ichigo ga kisetsu kara shichigatsu made hachigatsu tsudui teiru wa koto jijitsu dearu"
    );
    assert_eq!(
        run(&s, CopulaPredicate, &p),
        "ichigo no kisetsu ga shichigatsu kara hachigatsu made tsudui teiru koto wa dearu jijitsu"
    );
    assert_eq!(
        run(&s, AuxiliaryVerb, &p),
        "ichigo no kisetsu ga shichigatsu kara hachigatsu made teiru tsudui koto wa jijitsu dearu"
    );
    assert_eq!(
        run(&s, NounGenitive, &p),
        "kisetsu ichigo no ga shichigatsu kara hachigatsu made tsudui teiru koto wa jijitsu dearu"
    );
}

#[test]
fn japanese_subject_and_topic_never_move() {
    let s = japanese_ready();
    let records = identify_pairs(&s, VerbObject, &JapanesePolicy::default()).unwrap();
    for r in records.iter().filter(|r| r.applied) {
        for d in &r.dep_spans {
            assert!(d.head_id != TokenId(3) && d.head_id != TokenId(11));
        }
    }
    assert_eq!(records.iter().filter(|r| !r.applied).count(), 2);
}

fn coordination(rows: &[(&str, &str, u32, &str)]) -> Sentence {
    lift_copula(&sentence(rows), Language::English, &JaLexicons::default()).0
}

#[test]
fn coordinated_dependents_move_as_one_chunk() {
    let s = coordination(&[
        ("we", "PRON", 3, "nsubj"),
        ("are", "AUX", 3, "cop"),
        ("students", "NOUN", 0, "root"),
        ("and", "CCONJ", 5, "cc"),
        ("teachers", "NOUN", 3, "conj"),
    ]);
    let p = EnglishPolicy::default();
    assert_eq!(run(&s, CopulaPredicate, &p), "we students and teachers are");
    assert_eq!(run(&s, VerbObject, &p), "we students and teachers are");
}

#[test]
fn coordinated_heads_swap_separately() {
    let s = coordination(&[
        ("we", "PRON", 2, "nsubj"),
        ("like", "VERB", 0, "root"),
        ("cats", "NOUN", 2, "obj"),
        ("and", "CCONJ", 5, "cc"),
        ("love", "VERB", 2, "conj"),
        ("dogs", "NOUN", 5, "obj"),
    ]);
    assert_eq!(
        run(&s, VerbObject, &EnglishPolicy::default()),
        "we cats like and dogs love"
    );
}

#[test]
fn shared_trailing_dependent_moves_past_both_heads() {
    let s = coordination(&[
        ("we", "PRON", 2, "nsubj"),
        ("sing", "VERB", 0, "root"),
        ("and", "CCONJ", 4, "cc"),
        ("dance", "VERB", 2, "conj"),
        ("in", "ADP", 7, "case"),
        ("the", "DET", 7, "det"),
        ("park", "NOUN", 4, "obl"),
    ]);
    assert_eq!(
        run(&s, VerbObject, &EnglishPolicy::default()),
        "we in the park sing and dance"
    );
}

#[test]
fn private_trailing_dependent_gets_the_same_treatment() {
    let s = coordination(&[
        ("we", "PRON", 2, "nsubj"),
        ("dance", "VERB", 0, "root"),
        ("and", "CCONJ", 4, "cc"),
        ("play", "VERB", 2, "conj"),
        ("tag", "NOUN", 4, "obj"),
    ]);
    assert_eq!(
        run(&s, VerbObject, &EnglishPolicy::default()),
        "we tag dance and play"
    );
}
