//! Schemes used by real pools or proposed for them: PPS, PPLNS, geometric,
//! constrained geometric and IC.

use num_traits::{One, Signed, Zero};

use super::{Amount, Award, SchemeError, ShareContext};
use crate::history::History;
use crate::rational::{self, Rational};

/// Per-share rate of pay-per-share.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PpsRate {
    /// Fixed amount `c` per share.
    Fixed(Rational),
    /// `c = R / D`: the expected per-share value when a share solves the
    /// block with probability `1/D`.
    PerDifficulty(usize),
}

impl Default for PpsRate {
    fn default() -> Self {
        PpsRate::PerDifficulty(3)
    }
}

impl PpsRate {
    pub(super) fn validate(&self) -> Result<(), SchemeError> {
        match self {
            PpsRate::Fixed(c) if !c.is_positive() => {
                Err(SchemeError::InvalidParams(format!("PPS rate c must be positive, got {c}")))
            }
            PpsRate::PerDifficulty(0) => Err(SchemeError::InvalidParams("PPS difficulty D must be at least 1".into())),
            _ => Ok(()),
        }
    }

    pub(super) fn award(&self, ctx: &ShareContext) -> Rational {
        match self {
            PpsRate::Fixed(c) => c.clone(),
            PpsRate::PerDifficulty(d) => &ctx.net / rational::int(*d as i64),
        }
    }
}

pub(super) fn check_ratio(r: &Rational) -> Result<(), SchemeError> {
    if *r <= Rational::one() {
        return Err(SchemeError::InvalidRatio(r.to_string()));
    }
    Ok(())
}

/// `(Ω(s_{i+N}) - Ω(s_i)) R / N` when `s_{i+N}` exists.
///
/// Otherwise the window reaches past the end of the history and the award
/// is still open. The blocks already found inside the window are the full
/// solutions among `s_i..s_m`, and since `s_m` closes the last round that
/// count is `l + 1 - Ω(s_i)`; the pending award carries that amount.
pub(super) fn pplns(n: usize, pos: usize, h: &History) -> Award {
    let net = h.reward().net();
    let per_block = &net / rational::int(n as i64);
    let own = h.omega_at(pos);
    match h.shares().get(pos + n) {
        Some(_) => {
            let blocks = h.omega_at(pos + n) - own;
            Award::Settled(Amount::Exact(&per_block * rational::int(blocks as i64)))
        }
        None => {
            let blocks = h.round_count() + 1 - own;
            Award::Pending(Amount::Exact(&per_block * rational::int(blocks as i64)))
        }
    }
}

pub(super) fn geometric(r: &Rational, ctx: &ShareContext) -> Rational {
    (r - Rational::one()) / rational::pow(r, ctx.len - ctx.rank + 1) * &ctx.block
}

pub(super) fn constrained_geometric(r: &Rational, ctx: &ShareContext) -> Rational {
    let rn = rational::pow(r, ctx.len);
    geometric(r, ctx) * &rn / (&rn - Rational::one())
}

/// Round vector built from the full solution backwards: each earlier share
/// gets `1/r` of its successor.
pub(super) fn geometric_round(r: &Rational, len: usize, block: &Rational) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    let mut current = (r - Rational::one()) / r * block;
    for slot in out.iter_mut().rev() {
        *slot = current.clone();
        current /= r;
    }
    out
}

pub(super) fn constrained_geometric_round(r: &Rational, len: usize, block: &Rational) -> Vec<Rational> {
    let raw = geometric_round(r, len, block);
    // The raw round sums to B (1 - r^-n); rescale so it sums to B.
    let total: Rational = raw.iter().fold(Rational::zero(), |acc, x| acc + x);
    if total.is_zero() {
        return raw;
    }
    raw.into_iter().map(|x| x * block / &total).collect()
}

pub(super) fn ic(d: usize, ctx: &ShareContext) -> Rational {
    let d_q = rational::int(d as i64);
    if ctx.len <= d {
        let base = &ctx.net / &d_q;
        if ctx.rank < ctx.len {
            base
        } else {
            let residual = (Rational::one() - rational::int(ctx.len as i64) / &d_q) * &ctx.net;
            base + residual
        }
    } else {
        &ctx.net / rational::int(ctx.len as i64)
    }
}
