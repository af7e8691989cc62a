//! Swaps-per-sentence histograms.

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::swap::{CorrelationPair, SwapRecord};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StatsError {
    #[error("records mix pair types {expected} and {found}")]
    MixedPairTypes {
        expected: CorrelationPair,
        found: CorrelationPair,
    },
}

/// Number of sentences per count of applied `<H, D>` swaps. Identified
/// pairs (applied or skipped) are tallied alongside.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapHistogram {
    pub pair_type: Option<CorrelationPair>,
    pub counts: BTreeMap<usize, usize>,
    pub total_swaps: usize,
    pub total_identified: usize,
}

impl SwapHistogram {
    pub fn new(pair_type: Option<CorrelationPair>) -> Self {
        SwapHistogram {
            pair_type,
            ..Default::default()
        }
    }

    fn check(&mut self, pair: CorrelationPair) -> Result<(), StatsError> {
        match self.pair_type {
            None => {
                self.pair_type = Some(pair);
                Ok(())
            }
            Some(expected) if expected == pair => Ok(()),
            Some(expected) => Err(StatsError::MixedPairTypes {
                expected,
                found: pair,
            }),
        }
    }

    /// Adds one sentence given all of its records (none for a sentence
    /// without instances).
    pub fn add_sentence(&mut self, records: &[SwapRecord]) -> Result<(), StatsError> {
        let mut applied = 0;
        let mut identified = 0;
        for r in records {
            self.check(r.pair_type)?;
            identified += r.pair_count();
            if r.applied {
                applied += r.pair_count();
            }
        }
        *self.counts.entry(applied).or_default() += 1;
        self.total_swaps += applied;
        self.total_identified += identified;
        Ok(())
    }

    pub fn merge(&mut self, other: &SwapHistogram) -> Result<(), StatsError> {
        if let Some(p) = other.pair_type {
            self.check(p)?;
        }
        for (&k, &v) in &other.counts {
            *self.counts.entry(k).or_default() += v;
        }
        self.total_swaps += other.total_swaps;
        self.total_identified += other.total_identified;
        Ok(())
    }

    pub fn sentences(&self) -> usize {
        self.counts.values().sum()
    }

    /// Tab-separated `pair`, `swaps`, `sentences` rows with every bin from
    /// zero to the maximum filled in.
    pub fn to_tsv(&self) -> String {
        let pair = self.pair_type.map_or("-", CorrelationPair::name);
        let mut out = String::from("pair\tswaps\tsentences\n");
        let max = self.counts.keys().next_back().copied().unwrap_or(0);
        for k in 0..=max {
            let n = self.counts.get(&k).copied().unwrap_or(0);
            let _ = writeln!(out, "{pair}\t{k}\t{n}");
        }
        out
    }
}

/// Builds a histogram from per-sentence record groups.
pub fn swap_histogram<'a, I>(sentences: I) -> Result<SwapHistogram, StatsError>
where
    I: IntoIterator<Item = &'a [SwapRecord]>,
{
    let mut h = SwapHistogram::default();
    for records in sentences {
        h.add_sentence(records)?;
    }
    Ok(h)
}
