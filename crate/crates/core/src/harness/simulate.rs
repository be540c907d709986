//! A small stochastic pool: miners submit shares in proportion to their
//! hashrate, every share is a full solution with probability `p`, and the
//! scheme's awards are summed per miner and round.

use rand::distributions::WeightedIndex;
use rand::prelude::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::history::{History, RewardConfig};
use crate::rational::{self, Rational};
use crate::schemes::{Amount, Scheme, SchemeError};

pub const DEFAULT_MAX_ROUND_LEN: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Relative hashrates; normalized internally.
    pub weights: Vec<Rational>,
    /// Probability that a share is a full solution.
    pub p: f64,
    pub rounds: usize,
    pub seed: u64,
    pub scheme: Scheme,
    pub reward: RewardConfig,
    /// A round that reaches this length ends with a full solution.
    pub max_round_len: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    Config(String),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if self.weights.is_empty() {
            return Err(SimError::Config("at least one miner weight is required".into()));
        }
        if let Some(w) = self.weights.iter().find(|w| **w <= Rational::from_integer(0.into())) {
            return Err(SimError::Config(format!("miner weights must be positive, got {w}")));
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(SimError::Config(format!("p must lie in (0, 1), got {}", self.p)));
        }
        if self.rounds == 0 {
            return Err(SimError::Config("rounds must be at least 1".into()));
        }
        if self.max_round_len == 0 {
            return Err(SimError::Config("max_round_len must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinerStats {
    pub miner: usize,
    pub weight: Amount,
    pub shares: usize,
    pub total_income: Amount,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub scheme: String,
    pub rounds: usize,
    pub shares: usize,
    pub miners: Vec<MinerStats>,
    /// Mean and variance of the total paid per round.
    pub round_total_mean: f64,
    pub round_total_variance: f64,
}

/// Length and per-share miner of one simulated round.
fn simulate_round(cfg: &SimConfig, dist: &WeightedIndex<f64>, round: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(round);
    let mut miners = Vec::new();
    loop {
        miners.push(dist.sample(&mut rng));
        if miners.len() >= cfg.max_round_len || rng.gen_bool(cfg.p) {
            return miners;
        }
    }
}

fn mean_variance(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let variance = if values.len() > 1 {
        values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, variance)
}

pub fn simulate_pool(cfg: &SimConfig) -> Result<SimReport, SimError> {
    cfg.validate()?;
    let weights: Vec<f64> = cfg.weights.iter().map(rational::to_f64).collect();
    let dist = WeightedIndex::new(&weights).map_err(|e| SimError::Config(e.to_string()))?;
    let rounds: Vec<Vec<usize>> = (0..cfg.rounds as u64)
        .into_par_iter()
        .map(|r| simulate_round(cfg, &dist, r))
        .collect();

    let lengths: Vec<usize> = rounds.iter().map(Vec::len).collect();
    let history = History::from_round_lengths(&lengths, cfg.reward.clone()).map_err(SchemeError::from)?;
    let awards = cfg.scheme.awards(&history)?;
    let mode = cfg.scheme.numeric_mode();

    let miners = cfg.weights.len();
    let mut per_round = vec![vec![0.0; cfg.rounds]; miners];
    let mut totals = vec![Amount::zero_like(mode); miners];
    let mut shares = vec![0usize; miners];
    let mut round_totals = vec![0.0; cfg.rounds];
    let mut pos = 0;
    for (r, round) in rounds.iter().enumerate() {
        for &miner in round {
            let amount = awards[pos].amount();
            per_round[miner][r] += amount.to_f64();
            round_totals[r] += amount.to_f64();
            totals[miner] = &totals[miner] + amount;
            shares[miner] += 1;
            pos += 1;
        }
    }

    let stats = (0..miners)
        .map(|m| {
            let (mean, variance) = mean_variance(&per_round[m]);
            MinerStats {
                miner: m,
                weight: Amount::Exact(cfg.weights[m].clone()),
                shares: shares[m],
                total_income: totals[m].clone(),
                mean,
                variance,
                std_error: (variance / cfg.rounds as f64).sqrt(),
            }
        })
        .collect();
    let (round_total_mean, round_total_variance) = mean_variance(&round_totals);
    Ok(SimReport {
        scheme: cfg.scheme.to_string(),
        rounds: cfg.rounds,
        shares: history.len(),
        miners: stats,
        round_total_mean,
        round_total_variance,
    })
}
