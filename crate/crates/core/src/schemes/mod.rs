//! Reward-sharing schemes.
//!
//! A scheme assigns a non-negative award to every share of a history. All
//! schemes except Slush are evaluated in exact rational arithmetic; Slush
//! needs exponentials and runs in `f64`.
//!
//! Each scheme can be evaluated two ways:
//!
//! * [`Scheme::award`] looks a single share up by id and evaluates the
//!   closed-form expression for it.
//! * [`Scheme::awards`] evaluates a whole history at once, computing round
//!   vectors by suffix recurrences where the closed form is a sum or product.
//!
//! The axiom checkers search with the bulk path and replay counterexamples
//! through the per-share path, so a bug in one shows up as a replay failure.

mod families;
mod independence;
mod pool;
mod report;
mod slush;
mod spec;

use std::fmt;
use std::ops::Add;

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::history::{History, HistoryError, ShareId};
use crate::rational::{self, Rational};

pub use families::{AbsoluteFairEpsilon, EpsilonTable};
pub use independence::IndependenceScheme;
pub use pool::PpsRate;
pub use report::{PayoutEntry, PayoutReport, RoundTotal};
pub use slush::{slush_scores, SLUSH_DEFAULT_LAMBDA};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error(transparent)]
    History(#[from] HistoryError),
    #[error("round of length {len} exceeds the epsilon table (max {max})")]
    RoundTooLong { len: usize, max: usize },
    #[error("invalid epsilon table: {0}")]
    InvalidEpsilon(String),
    #[error("delta {delta} outside [0, R] with R = {net}")]
    InvalidDelta { delta: String, net: String },
    #[error("ratio r must exceed 1, got {0}")]
    InvalidRatio(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unknown independence scheme id {0} (expected 1..=6)")]
    UnknownSchemeId(u8),
    #[error("unknown scheme {0:?}")]
    UnknownScheme(String),
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NumericMode {
    Exact,
    Floating,
}

/// A payout value: exact rational, or `f64` for floating-mode schemes.
#[derive(Debug, Clone, PartialEq)]
pub enum Amount {
    Exact(Rational),
    Float(f64),
}

impl Amount {
    pub fn zero_like(mode: NumericMode) -> Amount {
        match mode {
            NumericMode::Exact => Amount::Exact(Rational::zero()),
            NumericMode::Floating => Amount::Float(0.0),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Amount::Exact(q) => rational::to_f64(q),
            Amount::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Amount::Exact(q) => Some(q),
            Amount::Float(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Amount::Exact(_))
    }

    /// Exact equality when both sides are exact, otherwise
    /// `|a - b| <= tolerance * scale`.
    pub fn approx_eq(&self, other: &Amount, tolerance: f64, scale: f64) -> bool {
        match (self, other) {
            (Amount::Exact(a), Amount::Exact(b)) => a == b,
            _ => (self.to_f64() - other.to_f64()).abs() <= tolerance * scale,
        }
    }

    /// `self > bound`, with the tolerance applied in floating mode.
    pub fn exceeds(&self, bound: &Rational, tolerance: f64, scale: f64) -> bool {
        match self {
            Amount::Exact(a) => a > bound,
            Amount::Float(x) => *x > rational::to_f64(bound) + tolerance * scale,
        }
    }

    /// Zero test: exact, or `|x| <= tolerance * scale`.
    pub fn is_zero_within(&self, tolerance: f64, scale: f64) -> bool {
        match self {
            Amount::Exact(a) => a.is_zero(),
            Amount::Float(x) => x.abs() <= tolerance * scale,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Amount::Exact(a) => a.is_negative(),
            Amount::Float(x) => *x < 0.0,
        }
    }

    pub fn sub(&self, other: &Amount) -> Amount {
        match (self, other) {
            (Amount::Exact(a), Amount::Exact(b)) => Amount::Exact(a - b),
            _ => Amount::Float(self.to_f64() - other.to_f64()),
        }
    }

    pub fn mul(&self, other: &Amount) -> Amount {
        match (self, other) {
            (Amount::Exact(a), Amount::Exact(b)) => Amount::Exact(a * b),
            _ => Amount::Float(self.to_f64() * other.to_f64()),
        }
    }

    /// Division; the caller guarantees a non-zero divisor.
    pub fn div(&self, other: &Amount) -> Amount {
        match (self, other) {
            (Amount::Exact(a), Amount::Exact(b)) => Amount::Exact(a / b),
            _ => Amount::Float(self.to_f64() / other.to_f64()),
        }
    }

    pub fn sum<'a>(mode: NumericMode, items: impl IntoIterator<Item = &'a Amount>) -> Amount {
        items
            .into_iter()
            .fold(Amount::zero_like(mode), |acc, a| &acc + a)
    }

    /// Human-readable rendering: reduced fraction, or 12 significant digits.
    pub fn display(&self, decimal: bool) -> String {
        match self {
            Amount::Exact(q) if decimal => rational::Decimal(q).to_string(),
            Amount::Exact(q) => q.to_string(),
            Amount::Float(x) => rational::format_significant(*x, 12),
        }
    }
}

impl Add<&Amount> for &Amount {
    type Output = Amount;

    fn add(self, rhs: &Amount) -> Amount {
        match (self, rhs) {
            (Amount::Exact(a), Amount::Exact(b)) => Amount::Exact(a + b),
            _ => Amount::Float(self.to_f64() + rhs.to_f64()),
        }
    }
}

impl fmt::Display for Amount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display(false))
    }
}

impl Serialize for Amount {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            Amount::Exact(q) => ser.serialize_str(&rational::to_fraction_string(q)),
            Amount::Float(x) => ser.serialize_f64(*x),
        }
    }
}

/// The award of one share. `Pending` only comes from PPLNS, for shares whose
/// window of N following shares runs past the end of the history; it
/// carries the amount already earned from blocks inside the history.
#[derive(Debug, Clone, PartialEq)]
pub enum Award {
    Settled(Amount),
    Pending(Amount),
}

impl Award {
    pub fn amount(&self) -> &Amount {
        match self {
            Award::Settled(a) | Award::Pending(a) => a,
        }
    }

    pub fn into_amount(self) -> Amount {
        match self {
            Award::Settled(a) | Award::Pending(a) => a,
        }
    }

    pub fn is_pending(&self) -> bool {
        matches!(self, Award::Pending(_))
    }
}

/// Every reward-sharing scheme the library knows about.
///
/// Parameters that are amounts (`delta`, PPS `c`, scheme 2's `lambda`) are
/// absolute values in the same unit as the history's reward configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum Scheme {
    /// `R / |P(s)|`.
    Proportional,
    AbsoluteFair(AbsoluteFairEpsilon),
    RelativeFair(EpsilonTable),
    /// Proportional below `k`; from `k` on, `delta` to the k-th share, the
    /// rest split among the first `k - 1`, nothing after. `k = None` is
    /// infinity.
    KPseudoProportional { k: Option<usize>, delta: Rational },
    Pps(PpsRate),
    Pplns { n: usize },
    Geometric { r: Rational },
    ConstrainedGeometric { r: Rational },
    Ic { d: usize },
    Slush { lambda: f64 },
    Independence(IndependenceScheme),
}

impl Scheme {
    pub fn absolute_fair(table: EpsilonTable) -> Result<Scheme, SchemeError> {
        Ok(Scheme::AbsoluteFair(AbsoluteFairEpsilon::new(table)?))
    }

    pub fn relative_fair(table: EpsilonTable) -> Scheme {
        Scheme::RelativeFair(table)
    }

    pub fn k_pseudo(k: Option<usize>, delta: Rational) -> Result<Scheme, SchemeError> {
        if matches!(k, Some(k) if k < 2) {
            return Err(SchemeError::InvalidParams("k must be at least 2".into()));
        }
        if delta.is_negative() {
            return Err(SchemeError::InvalidDelta {
                delta: delta.to_string(),
                net: "?".into(),
            });
        }
        Ok(Scheme::KPseudoProportional { k, delta })
    }

    pub fn pplns(n: usize) -> Result<Scheme, SchemeError> {
        if n == 0 {
            return Err(SchemeError::InvalidParams("PPLNS window N must be at least 1".into()));
        }
        Ok(Scheme::Pplns { n })
    }

    pub fn geometric(r: Rational) -> Result<Scheme, SchemeError> {
        pool::check_ratio(&r)?;
        Ok(Scheme::Geometric { r })
    }

    pub fn constrained_geometric(r: Rational) -> Result<Scheme, SchemeError> {
        pool::check_ratio(&r)?;
        Ok(Scheme::ConstrainedGeometric { r })
    }

    pub fn ic(d: usize) -> Result<Scheme, SchemeError> {
        if d == 0 {
            return Err(SchemeError::InvalidParams("IC parameter D must be at least 1".into()));
        }
        Ok(Scheme::Ic { d })
    }

    pub fn slush(lambda: f64) -> Result<Scheme, SchemeError> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(SchemeError::InvalidParams(format!(
                "slush lambda must be positive and finite, got {lambda}"
            )));
        }
        Ok(Scheme::Slush { lambda })
    }

    pub fn pps(rate: PpsRate) -> Result<Scheme, SchemeError> {
        rate.validate()?;
        Ok(Scheme::Pps(rate))
    }

    pub fn numeric_mode(&self) -> NumericMode {
        match self {
            Scheme::Slush { .. } => NumericMode::Floating,
            _ => NumericMode::Exact,
        }
    }

    /// Award of the share `id`, through the per-share closed form.
    pub fn award(&self, id: &ShareId, h: &History) -> Result<Award, SchemeError> {
        let ctx = ShareContext::lookup(id, h)?;
        let exact = |q: Rational| Ok(Award::Settled(Amount::Exact(q)));
        match self {
            Scheme::Proportional => exact(families::proportional(&ctx)),
            Scheme::AbsoluteFair(eps) => exact(families::absolute_fair(eps, &ctx)?),
            Scheme::RelativeFair(eps) => exact(families::relative_fair(eps, &ctx)?),
            Scheme::KPseudoProportional { k, delta } => exact(families::k_pseudo(*k, delta, &ctx)?),
            Scheme::Pps(rate) => exact(rate.award(&ctx)),
            Scheme::Pplns { n } => Ok(pool::pplns(*n, ctx.pos, h)),
            Scheme::Geometric { r } => exact(pool::geometric(r, &ctx)),
            Scheme::ConstrainedGeometric { r } => exact(pool::constrained_geometric(r, &ctx)),
            Scheme::Ic { d } => exact(pool::ic(*d, &ctx)),
            Scheme::Slush { lambda } => Ok(Award::Settled(Amount::Float(slush::award(*lambda, ctx.pos, h)))),
            Scheme::Independence(s) => exact(s.award(&ctx, h)?),
        }
    }

    /// Awards for every share of `h`, aligned with `h.shares()`.
    pub fn awards(&self, h: &History) -> Result<Vec<Award>, SchemeError> {
        let settled = |v: Vec<Rational>| {
            v.into_iter()
                .map(|q| Award::Settled(Amount::Exact(q)))
                .collect::<Vec<_>>()
        };
        match self {
            Scheme::AbsoluteFair(eps) => Ok(settled(per_round(h, |len, net| {
                families::absolute_fair_round(eps, len, net)
            })?)),
            Scheme::RelativeFair(eps) => Ok(settled(per_round(h, |len, net| {
                families::relative_fair_round(eps, len, net)
            })?)),
            Scheme::Geometric { r } => Ok(settled(per_round(h, |len, _| {
                Ok(pool::geometric_round(r, len, h.reward().block_reward()))
            })?)),
            Scheme::ConstrainedGeometric { r } => Ok(settled(per_round(h, |len, _| {
                Ok(pool::constrained_geometric_round(r, len, h.reward().block_reward()))
            })?)),
            Scheme::Pplns { n } => Ok((0..h.len()).map(|pos| pool::pplns(*n, pos, h)).collect()),
            Scheme::Slush { lambda } => Ok(slush::awards(*lambda, h)
                .into_iter()
                .map(|x| Award::Settled(Amount::Float(x)))
                .collect()),
            _ => (0..h.len())
                .map(|pos| {
                    let ctx = ShareContext::at(pos, h);
                    let q = match self {
                        Scheme::Proportional => families::proportional(&ctx),
                        Scheme::KPseudoProportional { k, delta } => families::k_pseudo(*k, delta, &ctx)?,
                        Scheme::Pps(rate) => rate.award(&ctx),
                        Scheme::Ic { d } => pool::ic(*d, &ctx),
                        Scheme::Independence(s) => s.award(&ctx, h)?,
                        _ => unreachable!("handled above"),
                    };
                    Ok(Award::Settled(Amount::Exact(q)))
                })
                .collect(),
        }
    }

    pub fn payout_report(&self, h: &History) -> Result<PayoutReport, SchemeError> {
        PayoutReport::compute(self, h)
    }
}

/// Where a share sits in its history, plus the reward amounts.
#[derive(Debug, Clone)]
pub(crate) struct ShareContext {
    pub pos: usize,
    pub rank: usize,
    pub len: usize,
    pub net: Rational,
    pub block: Rational,
}

impl ShareContext {
    fn lookup(id: &ShareId, h: &History) -> Result<Self, HistoryError> {
        let round = h.round_of(id)?;
        Ok(ShareContext {
            pos: h.position(id)?,
            rank: h.rank(id)?,
            len: round.len(),
            net: h.reward().net(),
            block: h.reward().block_reward().clone(),
        })
    }

    fn at(pos: usize, h: &History) -> Self {
        ShareContext {
            pos,
            rank: h.rank_at(pos),
            len: h.round_len_at(pos),
            net: h.reward().net(),
            block: h.reward().block_reward().clone(),
        }
    }
}

fn per_round(
    h: &History,
    mut round: impl FnMut(usize, &Rational) -> Result<Vec<Rational>, SchemeError>,
) -> Result<Vec<Rational>, SchemeError> {
    let net = h.reward().net();
    let mut out = Vec::with_capacity(h.len());
    for len in h.round_lengths() {
        out.extend(round(len, &net)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
