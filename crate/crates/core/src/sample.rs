//! Seeded selection of sentences for human validation.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::swap::CorrelationPair;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quota {
    pub total: usize,
    /// How many of `total` should have no applied swap.
    pub zero_swap: usize,
}

impl Quota {
    pub fn for_pair(pair: CorrelationPair) -> Quota {
        let total = match pair {
            CorrelationPair::VerbObject => 120,
            _ => 40,
        };
        Quota {
            total,
            zero_swap: 20,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shortfall {
    pub zero_swap: usize,
    pub swapped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    /// Indices into the candidate list, in annotation order.
    pub selected: Vec<usize>,
    pub zero_swap: usize,
    pub swapped: usize,
    pub shortfall: Shortfall,
    /// The corpus had no more sentences than the quota; all were taken.
    pub whole_corpus: bool,
}

/// Picks sentences given each candidate's applied-swap count.
///
/// The zero-swap quota is filled first when possible and the rest comes
/// from sentences with swaps. If one stratum runs short the other tops the
/// sample up and the gap is reported.
pub fn sample_for_annotation(applied_swaps: &[usize], quota: Quota, seed: u64) -> Sample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = applied_swaps.len();

    if n <= quota.total {
        let mut selected: Vec<usize> = (0..n).collect();
        selected.shuffle(&mut rng);
        let zero = applied_swaps.iter().filter(|&&k| k == 0).count();
        return Sample {
            selected,
            zero_swap: zero,
            swapped: n - zero,
            shortfall: Shortfall {
                zero_swap: quota.zero_swap.saturating_sub(zero),
                swapped: (quota.total - quota.zero_swap).saturating_sub(n - zero),
            },
            whole_corpus: true,
        };
    }

    let (mut zero, mut swapped): (Vec<usize>, Vec<usize>) =
        (0..n).partition(|&i| applied_swaps[i] == 0);
    zero.shuffle(&mut rng);
    swapped.shuffle(&mut rng);

    let want_zero = quota.zero_swap.min(quota.total);
    let want_swapped = quota.total - want_zero;
    let mut take_zero = want_zero.min(zero.len());
    let mut take_swapped = want_swapped.min(swapped.len());
    let shortfall = Shortfall {
        zero_swap: want_zero - take_zero,
        swapped: want_swapped - take_swapped,
    };
    let missing = quota.total - take_zero - take_swapped;
    let extra_swapped = missing.min(swapped.len() - take_swapped);
    take_swapped += extra_swapped;
    take_zero += (missing - extra_swapped).min(zero.len() - take_zero);

    let mut selected: Vec<usize> = zero[..take_zero]
        .iter()
        .chain(&swapped[..take_swapped])
        .copied()
        .collect();
    selected.shuffle(&mut rng);
    Sample {
        selected,
        zero_swap: take_zero,
        swapped: take_swapped,
        shortfall,
        whole_corpus: false,
    }
}
