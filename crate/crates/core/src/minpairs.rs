//! Minimal pairs: a sentence and its swapped variant.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::sentence::Sentence;
use crate::swap::{applied_pairs, swap_sentence, CorrelationPair, Language, SwapError, SwapPolicy};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalPair {
    pub sent_id: String,
    pub pair_type: CorrelationPair,
    pub language: Language,
    pub original: Vec<String>,
    pub swapped: Vec<String>,
    pub n_swaps: usize,
}

/// Joins forms the way each language is written: with spaces for English,
/// without for Japanese.
pub fn join_forms<S: AsRef<str>>(forms: &[S], language: Language) -> String {
    let sep = match language {
        Language::English => " ",
        Language::Japanese => "",
    };
    let mut out = String::new();
    for (i, f) in forms.iter().enumerate() {
        if i > 0 {
            out.push_str(sep);
        }
        out.push_str(f.as_ref());
    }
    out
}

impl MinimalPair {
    /// Builds a pair from an already swapped sentence. Returns `None` unless
    /// at least one swap applied and the surface order changed.
    pub fn from_swap(
        sent_id: &str,
        original: &Sentence,
        swapped: &Sentence,
        pair_type: CorrelationPair,
        language: Language,
        n_swaps: usize,
    ) -> Option<MinimalPair> {
        if n_swaps == 0 || original.ids() == swapped.ids() {
            return None;
        }
        let forms = |s: &Sentence| s.tokens().iter().map(|t| t.form.clone()).collect();
        Some(MinimalPair {
            sent_id: sent_id.into(),
            pair_type,
            language,
            original: forms(original),
            swapped: forms(swapped),
            n_swaps,
        })
    }

    pub fn original_text(&self) -> String {
        join_forms(&self.original, self.language)
    }

    pub fn swapped_text(&self) -> String {
        join_forms(&self.swapped, self.language)
    }
}

/// Swaps `sentence` and returns the pair when the order changed.
pub fn gen_minimal_pair(
    sent_id: &str,
    sentence: &Sentence,
    pair_type: CorrelationPair,
    policy: &dyn SwapPolicy,
) -> Result<Option<MinimalPair>, SwapError> {
    let (swapped, records) = swap_sentence(sentence, pair_type, policy)?;
    Ok(MinimalPair::from_swap(
        sent_id,
        sentence,
        &swapped,
        pair_type,
        policy.language(),
        applied_pairs(&records),
    ))
}
