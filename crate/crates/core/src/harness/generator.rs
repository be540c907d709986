//! Test-history generation: every small round shape, or a seeded random
//! stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::history::{History, RewardConfig};
use crate::rational::{self, Rational};

/// Round lengths of random histories are capped here before the `n_max`
/// filter.
const MAX_RANDOM_ROUND: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorMode {
    /// Every composition of at most `n_max` shares into at most
    /// `max_rounds` rounds, with times `1..=n`.
    Exhaustive,
    /// `trials` seeded draws. Draws with more than `n_max` shares are
    /// dropped, so the output is a subset that only grows with `n_max`.
    Random { trials: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct HistoryGenerator {
    pub mode: GeneratorMode,
    pub n_max: usize,
    pub max_rounds: usize,
    pub seed: u64,
    pub reward: RewardConfig,
}

impl HistoryGenerator {
    pub fn exhaustive(n_max: usize, max_rounds: usize, reward: RewardConfig) -> Self {
        HistoryGenerator {
            mode: GeneratorMode::Exhaustive,
            n_max,
            max_rounds,
            seed: 0,
            reward,
        }
    }

    pub fn random(n_max: usize, max_rounds: usize, trials: usize, seed: u64, reward: RewardConfig) -> Self {
        HistoryGenerator {
            mode: GeneratorMode::Random { trials },
            n_max,
            max_rounds,
            seed,
            reward,
        }
    }

    pub fn histories(&self) -> Vec<History> {
        generate_histories(self).collect()
    }
}

pub fn generate_histories(gen: &HistoryGenerator) -> Box<dyn Iterator<Item = History> + '_> {
    match gen.mode {
        GeneratorMode::Exhaustive => Box::new(shapes(gen.n_max, gen.max_rounds).into_iter().map(move |lengths| {
            History::from_round_lengths(&lengths, gen.reward.clone()).expect("valid shape")
        })),
        GeneratorMode::Random { trials } => Box::new(
            (0..trials as u64).filter_map(move |trial| random_history(gen.seed, trial, gen.n_max, gen.max_rounds, &gen.reward)),
        ),
    }
}

/// All round-length compositions with total at most `n_max` and at most
/// `max_rounds` parts, ordered by part count, then total, then
/// lexicographically.
pub fn shapes(n_max: usize, max_rounds: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for parts in 1..=max_rounds {
        for total in parts..=n_max {
            compositions(total, parts, &mut Vec::new(), &mut out);
        }
    }
    out
}

fn compositions(remaining: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if parts == 1 {
        prefix.push(remaining);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in 1..=remaining - (parts - 1) {
        prefix.push(first);
        compositions(remaining - first, parts - 1, prefix, out);
        prefix.pop();
    }
}

/// The random history of trial `trial`, or `None` when its draw exceeds
/// `n_max` shares. Depends only on `(seed, trial, max_rounds)` apart from
/// that filter.
pub fn random_history(seed: u64, trial: u64, n_max: usize, max_rounds: usize, reward: &RewardConfig) -> Option<History> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let rounds = rng.gen_range(1..=max_rounds.max(1));
    let lengths: Vec<usize> = (0..rounds).map(|_| geometric_len(&mut rng)).collect();
    let total: usize = lengths.iter().sum();
    // times advance by k/4 for k in 1..=8, drawn for every share even if
    // the draw is dropped, to keep the stream layout fixed
    let mut t = Rational::from_integer(0.into());
    let times: Vec<Rational> = (0..total)
        .map(|_| {
            t += rational::ratio(rng.gen_range(1..=8), 4);
            t.clone()
        })
        .collect();
    (total <= n_max).then(|| History::from_round_lengths_with_times(&lengths, times, reward.clone()).expect("valid draw"))
}

fn geometric_len(rng: &mut ChaCha8Rng) -> usize {
    let mut len = 1;
    while len < MAX_RANDOM_ROUND && !rng.gen_bool(0.5) {
        len += 1;
    }
    len
}
