//! Batch corpus processing: preprocessing, transformation, minimal pairs
//! and annotation samples.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::time::Instant;

use log::warn;
use rayon::prelude::*;
use serde::Serialize;

use wordorder_core::minpairs::MinimalPair;
use wordorder_core::policy::{policy_for, PolicyOptions};
use wordorder_core::preprocess::{
    lift_copula, preprocess_sentence, surface_text, DropReason, PreprocessConfig, PreprocessWarning,
    Preprocessed,
};
use wordorder_core::sample::{sample_for_annotation, Quota, Sample};
use wordorder_core::stats::SwapHistogram;
use wordorder_core::swap::{applied_pairs, swap_sentence, CorrelationPair, Language, SkipReason, SwapRecord};
use wordorder_core::Sentence;

use crate::conllu::{format_sentence, parse_conllu, ConlluError, ReadStats};
use crate::records::{write_jsonl, MinimalPairLine, RecordLine, Task};

const BATCH: usize = 4096;

/// Everything needed to turn an input sentence into swap-ready form and
/// then into a variant.
#[derive(Clone, Debug)]
pub struct JobOptions {
    pub language: Language,
    pub pair: CorrelationPair,
    pub policy: PolicyOptions,
    /// Cleanup to run before lifting; `None` if the input is already clean.
    pub preprocess: Option<PreprocessConfig>,
    pub workers: Option<usize>,
}

impl JobOptions {
    pub fn new(language: Language, pair: CorrelationPair) -> Self {
        JobOptions {
            language,
            pair,
            policy: PolicyOptions::default(),
            preprocess: None,
            workers: None,
        }
    }
}

/// Applies the optional cleanup and lifts copulas.
pub fn prepare(
    sentence: &Sentence,
    language: Language,
    preprocess: Option<&PreprocessConfig>,
    policy: &PolicyOptions,
) -> Result<(Sentence, Vec<PreprocessWarning>), DropReason> {
    let (clean, mut warnings) = match preprocess {
        Some(config) => match preprocess_sentence(sentence, config) {
            Preprocessed::Kept { sentence, warnings } => (sentence, warnings),
            Preprocessed::Dropped(reason) => return Err(reason),
        },
        None => (sentence.clone(), Vec::new()),
    };
    if clean.is_empty() {
        return Err(DropReason::Empty);
    }
    let (lifted, more) = lift_copula(&clean, language, &policy.lexicons);
    warnings.extend(more);
    Ok((lifted, warnings))
}

fn ensure_sent_id(sentence: &mut Sentence, index: usize) -> String {
    match sentence.sent_id() {
        Some(id) => id.to_owned(),
        None => {
            let id = (index + 1).to_string();
            sentence.set_meta("sent_id", id.clone());
            id
        }
    }
}

/// Reads `input` in batches, runs `work` on each sentence in parallel and
/// feeds results to `sink` in input order. `work` gets the 0-based index of
/// the sentence among all items read.
pub fn run_batched<R, T, F, S>(
    input: R,
    workers: Option<usize>,
    work: F,
    mut sink: S,
) -> anyhow::Result<ReadStats>
where
    R: BufRead,
    T: Send,
    F: Fn(usize, Sentence) -> T + Sync,
    S: FnMut(Result<T, ConlluError>) -> anyhow::Result<()>,
{
    let pool = match workers {
        Some(n) => Some(rayon::ThreadPoolBuilder::new().num_threads(n).build()?),
        None => None,
    };
    let mut reader = parse_conllu(input);
    let mut index = 0;
    loop {
        let batch: Vec<_> = reader.by_ref().take(BATCH).collect();
        if batch.is_empty() {
            break;
        }
        let start = index;
        index += batch.len();
        let run = || -> Vec<Result<T, ConlluError>> {
            batch
                .into_par_iter()
                .enumerate()
                .map(|(i, item)| item.map(|s| work(start + i, s)))
                .collect()
        };
        let results = match &pool {
            Some(p) => p.install(run),
            None => run(),
        };
        for r in results {
            sink(r)?;
        }
    }
    Ok(reader.stats())
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ProcessingReport {
    pub sentences_read: usize,
    pub sentences_written: usize,
    pub parse_errors: usize,
    pub dropped: BTreeMap<DropReason, usize>,
    pub multiword_ranges: usize,
    pub empty_nodes: usize,
    pub warnings: usize,
    pub records: usize,
    pub pairs_identified: usize,
    pub pairs_applied: usize,
    pub skipped: BTreeMap<SkipReason, usize>,
    pub histogram: SwapHistogram,
    pub elapsed_secs: f64,
    pub sentences_per_minute: f64,
}

impl ProcessingReport {
    fn finish(&mut self, stats: ReadStats, started: Instant) {
        self.multiword_ranges = stats.multiword_ranges;
        self.empty_nodes = stats.empty_nodes;
        self.elapsed_secs = started.elapsed().as_secs_f64();
        if self.elapsed_secs > 0.0 {
            self.sentences_per_minute = self.sentences_read as f64 * 60.0 / self.elapsed_secs;
        }
    }

    fn error(&mut self, e: &ConlluError) {
        self.parse_errors += 1;
        warn!("skipping sentence: {e}");
    }
}

enum Outcome {
    Kept {
        text: String,
        sent_id: String,
        records: Vec<SwapRecord>,
        warnings: usize,
    },
    Dropped(DropReason),
}

/// Writes the cleaned and lifted corpus.
pub fn preprocess_corpus<R: BufRead, W: Write>(
    input: R,
    output: &mut W,
    language: Language,
    config: Option<&PreprocessConfig>,
    policy: &PolicyOptions,
    workers: Option<usize>,
) -> anyhow::Result<ProcessingReport> {
    let started = Instant::now();
    let mut report = ProcessingReport::default();
    let stats = run_batched(
        input,
        workers,
        |i, mut s| {
            let sent_id = ensure_sent_id(&mut s, i);
            match prepare(&s, language, config, policy) {
                Ok((out, warnings)) => {
                    let mut text = String::new();
                    format_sentence(&mut text, &out);
                    Outcome::Kept {
                        text,
                        sent_id,
                        records: Vec::new(),
                        warnings: warnings.len(),
                    }
                }
                Err(reason) => Outcome::Dropped(reason),
            }
        },
        |r| {
            report.sentences_read += 1;
            match r {
                Err(e) => report.error(&e),
                Ok(Outcome::Dropped(reason)) => *report.dropped.entry(reason).or_default() += 1,
                Ok(Outcome::Kept { text, warnings, .. }) => {
                    report.sentences_written += 1;
                    report.warnings += warnings;
                    output.write_all(text.as_bytes())?;
                }
            }
            Ok(())
        },
    )?;
    report.finish(stats, started);
    Ok(report)
}

/// Swaps every sentence and writes the variant corpus plus, optionally, the
/// swap records.
pub fn transform_corpus<R: BufRead, W: Write>(
    input: R,
    output: &mut W,
    mut records_out: Option<&mut dyn Write>,
    options: &JobOptions,
) -> anyhow::Result<ProcessingReport> {
    let started = Instant::now();
    let policy = policy_for(options.language, &options.policy);
    let mut report = ProcessingReport {
        histogram: SwapHistogram::new(Some(options.pair)),
        ..Default::default()
    };
    let stats = run_batched(
        input,
        options.workers,
        |i, mut s| {
            let sent_id = ensure_sent_id(&mut s, i);
            let (ready, warnings) = match prepare(
                &s,
                options.language,
                options.preprocess.as_ref(),
                &options.policy,
            ) {
                Ok(r) => r,
                Err(reason) => return Outcome::Dropped(reason),
            };
            let (mut swapped, records) = match swap_sentence(&ready, options.pair, policy.as_ref()) {
                Ok(r) => r,
                Err(_) => return Outcome::Dropped(DropReason::InvalidTree),
            };
            if swapped.meta_value("text").is_some() {
                let text = surface_text(&swapped, options.language);
                swapped.set_meta("text", text);
            }
            let mut text = String::new();
            format_sentence(&mut text, &swapped);
            Outcome::Kept {
                text,
                sent_id,
                records,
                warnings: warnings.len(),
            }
        },
        |r| {
            report.sentences_read += 1;
            match r {
                Err(e) => report.error(&e),
                Ok(Outcome::Dropped(reason)) => *report.dropped.entry(reason).or_default() += 1,
                Ok(Outcome::Kept {
                    text,
                    sent_id,
                    records,
                    warnings,
                }) => {
                    report.sentences_written += 1;
                    report.warnings += warnings;
                    report.records += records.len();
                    for rec in &records {
                        report.pairs_identified += rec.pair_count();
                        if let Some(reason) = rec.skip_reason {
                            *report.skipped.entry(reason).or_default() += rec.pair_count();
                        }
                    }
                    report.pairs_applied += applied_pairs(&records);
                    report.histogram.add_sentence(&records)?;
                    output.write_all(text.as_bytes())?;
                    if let Some(w) = records_out.as_deref_mut() {
                        for rec in &records {
                            write_jsonl(&mut *w, &RecordLine::new(&sent_id, rec))?;
                        }
                    }
                }
            }
            Ok(())
        },
    )?;
    report.finish(stats, started);
    Ok(report)
}

/// Writes a minimal pair for every sentence whose order changed. Returns
/// the number of pairs written.
pub fn minimal_pairs<R: BufRead, W: Write>(
    input: R,
    output: &mut W,
    options: &JobOptions,
) -> anyhow::Result<(usize, ProcessingReport)> {
    let started = Instant::now();
    let policy = policy_for(options.language, &options.policy);
    let mut report = ProcessingReport::default();
    let mut written = 0;
    let stats = run_batched(
        input,
        options.workers,
        |i, mut s| {
            let sent_id = ensure_sent_id(&mut s, i);
            let (ready, _) = prepare(
                &s,
                options.language,
                options.preprocess.as_ref(),
                &options.policy,
            )?;
            let (swapped, records) = swap_sentence(&ready, options.pair, policy.as_ref())
                .map_err(|_| DropReason::InvalidTree)?;
            Ok(MinimalPair::from_swap(
                &sent_id,
                &ready,
                &swapped,
                options.pair,
                options.language,
                applied_pairs(&records),
            ))
        },
        |r: Result<Result<Option<MinimalPair>, DropReason>, ConlluError>| {
            report.sentences_read += 1;
            match r {
                Err(e) => report.error(&e),
                Ok(Err(reason)) => *report.dropped.entry(reason).or_default() += 1,
                Ok(Ok(pair)) => {
                    report.sentences_written += 1;
                    if let Some(p) = pair {
                        write_jsonl(output, &MinimalPairLine::from(&p))?;
                        written += 1;
                    }
                }
            }
            Ok(())
        },
    )?;
    report.finish(stats, started);
    Ok((written, report))
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleSummary {
    pub pair_type: CorrelationPair,
    pub seed: u64,
    pub quota: Quota,
    pub corpus_sentences: usize,
    pub corpus_zero_swap: usize,
    /// Share of corpus sentences without an applied swap; feed this to
    /// `score --zero-swap-fraction`.
    pub corpus_zero_swap_fraction: f64,
    pub sample: Sample,
}

/// Draws the annotation sample and builds its tasks in sample order.
pub fn sample_tasks<R: BufRead>(
    input: R,
    options: &JobOptions,
    seed: u64,
) -> anyhow::Result<(Vec<Task>, SampleSummary)> {
    let policy = policy_for(options.language, &options.policy);
    let mut tasks = Vec::new();
    run_batched(
        input,
        options.workers,
        |i, mut s| {
            let sent_id = ensure_sent_id(&mut s, i);
            let (ready, _) = prepare(
                &s,
                options.language,
                options.preprocess.as_ref(),
                &options.policy,
            )
            .ok()?;
            let (swapped, records) = swap_sentence(&ready, options.pair, policy.as_ref()).ok()?;
            Some((
                applied_pairs(&records),
                Task::new(&sent_id, options.pair, options.language, &ready, &swapped, &records),
            ))
        },
        |r| {
            match r {
                Ok(Some(t)) => tasks.push(t),
                Ok(None) => {}
                Err(e) => warn!("skipping sentence: {e}"),
            }
            Ok(())
        },
    )?;

    let counts: Vec<usize> = tasks.iter().map(|(k, _)| *k).collect();
    let quota = Quota::for_pair(options.pair);
    let sample = sample_for_annotation(&counts, quota, seed);
    if sample.whole_corpus {
        warn!(
            "corpus has {} sentences, not more than the quota of {}; taking all",
            counts.len(),
            quota.total
        );
    }
    if sample.shortfall != Default::default() {
        warn!("sample shortfall: {:?}", sample.shortfall);
    }
    let zero = counts.iter().filter(|&&k| k == 0).count();
    let summary = SampleSummary {
        pair_type: options.pair,
        seed,
        quota,
        corpus_sentences: counts.len(),
        corpus_zero_swap: zero,
        corpus_zero_swap_fraction: if counts.is_empty() {
            0.0
        } else {
            zero as f64 / counts.len() as f64
        },
        sample: sample.clone(),
    };
    let picked = sample
        .selected
        .iter()
        .map(|&i| tasks[i].1.clone())
        .collect();
    Ok((picked, summary))
}
