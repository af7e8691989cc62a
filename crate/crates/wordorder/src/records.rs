//! JSON Lines forms of swap records, minimal pairs and annotation tasks.
//!
//! Token ids in records and tasks are the ids of the input corpus. The
//! transformed CoNLL-U renumbers tokens, so records always refer back to
//! the sentence as it was before swapping.

use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};

use anyhow::Context;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use wordorder_core::minpairs::MinimalPair;
use wordorder_core::swap::{CorrelationPair, Language, SkipReason, Span, SwapRecord};
use wordorder_core::validation::{silver_pairs, GoldPair, SilverSentence};
use wordorder_core::{Sentence, TokenId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordLine {
    pub sent_id: String,
    pub pair_type: CorrelationPair,
    pub head: Vec<u32>,
    pub deps: Vec<Vec<u32>>,
    pub applied: bool,
    pub skip_reason: Option<SkipReason>,
    pub head_id: u32,
    pub dep_head_ids: Vec<u32>,
}

fn raw(ids: &[TokenId]) -> Vec<u32> {
    ids.iter().map(|t| t.0).collect()
}

fn typed(ids: &[u32]) -> Vec<TokenId> {
    ids.iter().copied().map(TokenId).collect()
}

impl RecordLine {
    pub fn new(sent_id: &str, record: &SwapRecord) -> Self {
        RecordLine {
            sent_id: sent_id.into(),
            pair_type: record.pair_type,
            head: raw(&record.head_span.token_ids),
            deps: record.dep_spans.iter().map(|d| raw(&d.token_ids)).collect(),
            applied: record.applied,
            skip_reason: record.skip_reason,
            head_id: record.head_span.head_id.0,
            dep_head_ids: record.dep_spans.iter().map(|d| d.head_id.0).collect(),
        }
    }

    pub fn to_record(&self) -> SwapRecord {
        SwapRecord {
            pair_type: self.pair_type,
            head_span: Span {
                token_ids: typed(&self.head),
                head_id: TokenId(self.head_id),
            },
            dep_spans: self
                .deps
                .iter()
                .zip(&self.dep_head_ids)
                .map(|(ids, &h)| Span {
                    token_ids: typed(ids),
                    head_id: TokenId(h),
                })
                .collect(),
            applied: self.applied,
            skip_reason: self.skip_reason,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalPairLine {
    pub sent_id: String,
    pub pair_type: CorrelationPair,
    pub language: Language,
    pub original: String,
    pub swapped: String,
    pub n_swaps: usize,
}

impl From<&MinimalPair> for MinimalPairLine {
    fn from(p: &MinimalPair) -> Self {
        MinimalPairLine {
            sent_id: p.sent_id.clone(),
            pair_type: p.pair_type,
            language: p.language,
            original: p.original_text(),
            swapped: p.swapped_text(),
            n_swaps: p.n_swaps,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskToken {
    pub id: u32,
    pub form: String,
}

/// One sentence to annotate. `tokens` are in the original order;
/// `swapped_order` lists the same ids in the counterfactual order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Task {
    pub sent_id: String,
    pub pair_type: CorrelationPair,
    pub language: Language,
    pub tokens: Vec<TaskToken>,
    pub swapped_order: Vec<u32>,
    pub silver: Vec<GoldPair>,
}

impl Task {
    pub fn new(
        sent_id: &str,
        pair_type: CorrelationPair,
        language: Language,
        original: &Sentence,
        swapped: &Sentence,
        records: &[SwapRecord],
    ) -> Self {
        Task {
            sent_id: sent_id.into(),
            pair_type,
            language,
            tokens: original
                .tokens()
                .iter()
                .map(|t| TaskToken {
                    id: t.id.0,
                    form: t.form.clone(),
                })
                .collect(),
            swapped_order: swapped.ids().iter().map(|t| t.0).collect(),
            silver: silver_pairs(records),
        }
    }

    pub fn silver_sentence(&self) -> SilverSentence {
        SilverSentence {
            sent_id: self.sent_id.clone(),
            token_ids: self.tokens.iter().map(|t| TokenId(t.id)).collect(),
            pairs: self.silver.clone(),
        }
    }
}

pub fn write_jsonl<W: Write + ?Sized, T: Serialize>(w: &mut W, item: &T) -> io::Result<()> {
    serde_json::to_writer(&mut *w, item)?;
    w.write_all(b"\n")
}

/// Reads every non-blank line of a JSON Lines stream.
pub fn read_jsonl<R: BufRead, T: DeserializeOwned>(input: R) -> anyhow::Result<Vec<T>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).with_context(|| format!("line {}", i + 1))?);
    }
    Ok(out)
}

/// Groups record lines by sentence, keeping first-seen sentence order.
pub fn group_records(lines: &[RecordLine]) -> Vec<(String, Vec<SwapRecord>)> {
    let mut order = Vec::new();
    let mut groups: BTreeMap<&str, Vec<SwapRecord>> = BTreeMap::new();
    for l in lines {
        let g = groups.entry(&l.sent_id).or_insert_with(|| {
            order.push(l.sent_id.clone());
            Vec::new()
        });
        g.push(l.to_record());
    }
    order
        .into_iter()
        .map(|id| {
            let records = groups.remove(id.as_str()).unwrap_or_default();
            (id, records)
        })
        .collect()
}
