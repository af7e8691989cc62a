use std::path::Path;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wordorder::conllu::{format_sentence, parse_conllu, serialize_conllu};
use wordorder_core::swap::Language;
use wordorder_core::testgen::random_sentence;

fn fixture(name: &str) -> Vec<u8> {
    std::fs::read(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)).unwrap()
}

#[test]
fn fixture_round_trips_byte_for_byte() {
    for name in ["ud_roundtrip.conllu", "en_strawberry.conllu", "coordination.conllu"] {
        let bytes = fixture(name);
        let sentences: Vec<_> = parse_conllu(bytes.as_slice()).collect::<Result<_, _>>().unwrap();
        let mut out = Vec::new();
        serialize_conllu(&mut out, &sentences).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), String::from_utf8(bytes).unwrap(), "{name}");
    }
}

#[test]
fn comments_without_value_survive() {
    let bytes = fixture("ud_roundtrip.conllu");
    let s: Vec<_> = parse_conllu(bytes.as_slice()).map(Result::unwrap).collect();
    assert_eq!(s[1].meta.iter().find(|(k, _)| k == "translit"), Some(&("translit".to_string(), None)));
    assert_eq!(s[0].meta_value("newdoc id"), Some("doc-1"));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn generated_sentences_round_trip(seed: u64, len in 1usize..30) {
        let lang = if seed % 2 == 0 { Language::English } else { Language::Japanese };
        let s = random_sentence(&mut ChaCha8Rng::seed_from_u64(seed), len, lang);
        let mut text = String::new();
        format_sentence(&mut text, &s);
        let back: Vec<_> = parse_conllu(text.as_bytes()).collect::<Result<_, _>>().unwrap();
        prop_assert_eq!(back, vec![s]);
    }
}
