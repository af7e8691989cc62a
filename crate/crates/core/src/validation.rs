//! Scoring silver swaps against human annotations.
//!
//! A silver pair is the (head ids, dependent ids) set pair of one applied
//! `<H, D>` swap. It counts as correct when the annotator listed exactly the
//! same two sets for the same sentence. Counts are pooled over all annotated
//! sentences.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::sentence::TokenId;
use crate::swap::{CorrelationPair, SwapRecord};

/// One `<H, D>` pair as two token-id sets.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GoldPair {
    pub head: Vec<TokenId>,
    pub deps: Vec<TokenId>,
}

impl GoldPair {
    pub fn new(mut head: Vec<TokenId>, mut deps: Vec<TokenId>) -> Self {
        head.sort_unstable();
        head.dedup();
        deps.sort_unstable();
        deps.dedup();
        GoldPair { head, deps }
    }

    fn normalized(&self) -> GoldPair {
        GoldPair::new(self.head.clone(), self.deps.clone())
    }
}

/// Silver pairs of a record list: applied records, one pair per dependent.
pub fn silver_pairs(records: &[SwapRecord]) -> Vec<GoldPair> {
    records
        .iter()
        .filter(|r| r.applied)
        .flat_map(|r| {
            r.dep_spans
                .iter()
                .map(|d| GoldPair::new(r.head_span.token_ids.clone(), d.token_ids.clone()))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationRecord {
    pub sent_id: String,
    pub annotator_id: String,
    pub gold_pairs: Vec<GoldPair>,
    pub likert: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
    /// Milliseconds since the Unix epoch.
    #[serde(default)]
    pub timestamp: u64,
}

/// Silver side of one sentence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SilverSentence {
    pub sent_id: String,
    pub token_ids: Vec<TokenId>,
    pub pairs: Vec<GoldPair>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    UnknownSentence,
    LikertOutOfRange,
    UnknownToken,
    EmptySpan,
    Duplicate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub sent_id: String,
    pub annotator_id: String,
    pub reason: RejectReason,
}

/// Checks an annotation against its sentence.
pub fn check_annotation(
    record: &AnnotationRecord,
    sentence: Option<&SilverSentence>,
) -> Result<(), RejectReason> {
    let Some(sentence) = sentence else {
        return Err(RejectReason::UnknownSentence);
    };
    if !(1..=5).contains(&record.likert) {
        return Err(RejectReason::LikertOutOfRange);
    }
    for pair in &record.gold_pairs {
        if pair.head.is_empty() || pair.deps.is_empty() {
            return Err(RejectReason::EmptySpan);
        }
        if pair
            .head
            .iter()
            .chain(&pair.deps)
            .any(|id| !sentence.token_ids.contains(id))
        {
            return Err(RejectReason::UnknownToken);
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumCounts {
    pub n_sentences: usize,
    pub n_silver: usize,
    pub n_gold: usize,
    pub n_correct: usize,
    pub likert_sum: u64,
}

impl StratumCounts {
    fn add(&mut self, silver: usize, gold: usize, correct: usize, likert: u8) {
        self.n_sentences += 1;
        self.n_silver += silver;
        self.n_gold += gold;
        self.n_correct += correct;
        self.likert_sum += u64::from(likert);
    }
}

/// Annotated sentences split by whether the algorithm swapped anything.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Strata {
    pub zero_swap: StratumCounts,
    pub swapped: StratumCounts,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reweighted {
    pub corpus_zero_swap_fraction: f64,
    pub weight_zero_swap: f64,
    pub weight_swapped: f64,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub mean_likert: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub pair_type: Option<CorrelationPair>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub mean_likert: Option<f64>,
    pub n_sentences: usize,
    pub n_silver: usize,
    pub n_gold: usize,
    pub n_correct: usize,
    pub strata: Strata,
    pub rejected: Vec<Rejection>,
    /// Later annotations of an already annotated sentence, ignored.
    pub duplicates: Vec<Rejection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reweighted: Option<Reweighted>,
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    (den > 0.0).then(|| num / den)
}

fn percent(v: Option<f64>) -> String {
    match v {
        Some(v) => alloc::format!("{:.1}", v * 100.0),
        None => "-".into(),
    }
}

impl ValidationReport {
    /// `pair  Prec  Rec  Val` table, raw and (if present) reweighted.
    pub fn table(&self) -> String {
        let pair = self.pair_type.map_or("-", CorrelationPair::label);
        let likert = |v: Option<f64>| v.map_or("-".into(), |v| alloc::format!("{v:.2}"));
        let mut out = String::from("pair\tPrec\tRec\tVal\tsentences\n");
        let _ = writeln!(
            out,
            "{pair}\t{}\t{}\t{}\t{}",
            percent(self.precision),
            percent(self.recall),
            likert(self.mean_likert),
            self.n_sentences
        );
        if let Some(r) = &self.reweighted {
            let _ = writeln!(
                out,
                "{pair} (reweighted)\t{}\t{}\t{}\t{}",
                percent(r.precision),
                percent(r.recall),
                likert(r.mean_likert),
                self.n_sentences
            );
        }
        out
    }
}

/// Scores annotations against silver pairs. Each sentence counts once: the
/// earliest annotation by timestamp wins (ties broken by content, so the
/// result does not depend on input order) and the rest
/// are listed as duplicates. Invalid annotations are listed as rejected.
pub fn score(
    pair_type: Option<CorrelationPair>,
    silver: &[SilverSentence],
    annotations: &[AnnotationRecord],
) -> ValidationReport {
    let by_id: BTreeMap<&str, &SilverSentence> =
        silver.iter().map(|s| (s.sent_id.as_str(), s)).collect();

    let mut order: Vec<usize> = (0..annotations.len()).collect();
    order.sort_by(|&i, &j| {
        let key = |a: &'_ AnnotationRecord| (a.timestamp, a.annotator_id.clone(), a.likert, a.gold_pairs.clone());
        key(&annotations[i]).cmp(&key(&annotations[j]))
    });

    let mut rejected = Vec::new();
    let mut duplicates = Vec::new();
    let mut seen = BTreeSet::new();
    let mut strata = Strata::default();
    for i in order {
        let a = &annotations[i];
        let rejection = |reason| Rejection {
            sent_id: a.sent_id.clone(),
            annotator_id: a.annotator_id.clone(),
            reason,
        };
        let sentence = by_id.get(a.sent_id.as_str()).copied();
        if let Err(reason) = check_annotation(a, sentence) {
            rejected.push(rejection(reason));
            continue;
        }
        let Some(sentence) = sentence else { continue };
        if !seen.insert(a.sent_id.as_str()) {
            duplicates.push(rejection(RejectReason::Duplicate));
            continue;
        }

        let silver: BTreeSet<GoldPair> = sentence.pairs.iter().map(GoldPair::normalized).collect();
        let gold: BTreeSet<GoldPair> = a.gold_pairs.iter().map(GoldPair::normalized).collect();
        let correct = silver.intersection(&gold).count();
        let stratum = if silver.is_empty() {
            &mut strata.zero_swap
        } else {
            &mut strata.swapped
        };
        stratum.add(silver.len(), gold.len(), correct, a.likert);
    }

    let (z, s) = (strata.zero_swap, strata.swapped);
    let n_sentences = z.n_sentences + s.n_sentences;
    let n_silver = z.n_silver + s.n_silver;
    let n_gold = z.n_gold + s.n_gold;
    let n_correct = z.n_correct + s.n_correct;
    ValidationReport {
        pair_type,
        precision: ratio(n_correct as f64, n_silver as f64),
        recall: ratio(n_correct as f64, n_gold as f64),
        mean_likert: ratio((z.likert_sum + s.likert_sum) as f64, n_sentences as f64),
        n_sentences,
        n_silver,
        n_gold,
        n_correct,
        strata,
        rejected,
        duplicates,
        reweighted: None,
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("zero-swap fraction {0} is outside [0, 1]")]
pub struct FractionOutOfRange(pub f64);

/// Reweights the two strata so that zero-swap sentences carry their corpus
/// share `f0` instead of their share of the annotated sample.
///
/// With `n_Z` zero-swap and `n_S` swapped sentences annotated (`N` in all),
/// every zero-swap sentence gets weight `f0 * N / n_Z` and every swapped
/// sentence `(1 - f0) * N / n_S`. Zero-swap sentences have no silver pairs,
/// so precision is unaffected; their gold pairs are missed swaps and count
/// towards recall with their weight. If either stratum is empty the weights
/// are undefined and the raw figures are kept.
pub fn reweight(
    report: &ValidationReport,
    corpus_zero_swap_fraction: f64,
) -> Result<ValidationReport, FractionOutOfRange> {
    let f0 = corpus_zero_swap_fraction;
    if !(0.0..=1.0).contains(&f0) {
        return Err(FractionOutOfRange(f0));
    }
    let (z, s) = (report.strata.zero_swap, report.strata.swapped);
    let n = (z.n_sentences + s.n_sentences) as f64;
    let (wz, ws) = if z.n_sentences == 0 || s.n_sentences == 0 {
        (1.0, 1.0)
    } else {
        (f0 * n / z.n_sentences as f64, (1.0 - f0) * n / s.n_sentences as f64)
    };
    let w = |zv: usize, sv: usize| wz * zv as f64 + ws * sv as f64;
    let correct = w(z.n_correct, s.n_correct);
    let mut out = report.clone();
    out.reweighted = Some(Reweighted {
        corpus_zero_swap_fraction: f0,
        weight_zero_swap: wz,
        weight_swapped: ws,
        precision: ratio(correct, w(z.n_silver, s.n_silver)),
        recall: ratio(correct, w(z.n_gold, s.n_gold)),
        mean_likert: ratio(
            wz * z.likert_sum as f64 + ws * s.likert_sum as f64,
            w(z.n_sentences, s.n_sentences),
        ),
    });
    Ok(out)
}
