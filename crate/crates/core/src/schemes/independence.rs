//! Six schemes that each break exactly one axiom while keeping the other
//! five, showing that none of the axioms follows from the rest.

use num_traits::Signed;

use super::{families, SchemeError, ShareContext};
use crate::history::History;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndependenceScheme {
    /// 1: proportional for odd round lengths, half of it for even ones.
    ParityHalving,
    /// 2: first share of a multi-share round gets `R - λ` on top of an
    /// equal split of `λ`.
    FirstShareBonus { lambda: Rational },
    /// 3: the first two shares split `R / 2^(n-2)`, each later share
    /// doubles its predecessor.
    Doubling,
    /// 4: scheme 1's halving keyed on the parity of the history's first round.
    FirstRoundParity,
    /// 5: twice the proportional award.
    DoubleProportional,
    /// 6: k-pseudo-proportional with k = 2, `δ = R/2` when the round's first
    /// two shares are less than `threshold` apart and `δ = R/3` otherwise.
    GapSwitch { threshold: Rational },
}

impl IndependenceScheme {
    pub fn from_id(id: u8, lambda: Option<Rational>, threshold: Option<Rational>) -> Result<Self, SchemeError> {
        let scheme = match id {
            1 => IndependenceScheme::ParityHalving,
            2 => IndependenceScheme::FirstShareBonus {
                lambda: lambda.unwrap_or_else(|| rational::ratio(1, 2)),
            },
            3 => IndependenceScheme::Doubling,
            4 => IndependenceScheme::FirstRoundParity,
            5 => IndependenceScheme::DoubleProportional,
            6 => IndependenceScheme::GapSwitch {
                threshold: threshold.unwrap_or_else(|| rational::ratio(1, 2)),
            },
            other => return Err(SchemeError::UnknownSchemeId(other)),
        };
        scheme.validate()?;
        Ok(scheme)
    }

    pub fn id(&self) -> u8 {
        match self {
            IndependenceScheme::ParityHalving => 1,
            IndependenceScheme::FirstShareBonus { .. } => 2,
            IndependenceScheme::Doubling => 3,
            IndependenceScheme::FirstRoundParity => 4,
            IndependenceScheme::DoubleProportional => 5,
            IndependenceScheme::GapSwitch { .. } => 6,
        }
    }

    fn validate(&self) -> Result<(), SchemeError> {
        match self {
            IndependenceScheme::FirstShareBonus { lambda } if !lambda.is_positive() => Err(
                SchemeError::InvalidParams(format!("scheme 2 needs lambda > 0, got {lambda}")),
            ),
            IndependenceScheme::GapSwitch { threshold } if !threshold.is_positive() => Err(
                SchemeError::InvalidParams(format!("scheme 6 needs T > 0, got {threshold}")),
            ),
            _ => Ok(()),
        }
    }

    pub(super) fn award(&self, ctx: &ShareContext, h: &History) -> Result<Rational, SchemeError> {
        let n = rational::int(ctx.len as i64);
        let net = &ctx.net;
        Ok(match self {
            IndependenceScheme::ParityHalving => halved_if_even(net, ctx.len, ctx.len),
            IndependenceScheme::FirstShareBonus { lambda } => {
                if !(lambda.is_positive() && lambda < net) {
                    return Err(SchemeError::InvalidParams(format!(
                        "scheme 2 needs 0 < lambda < R, got lambda = {lambda}, R = {net}"
                    )));
                }
                if ctx.len == 1 {
                    net.clone()
                } else if ctx.rank == 1 {
                    net - lambda + lambda / &n
                } else {
                    lambda / &n
                }
            }
            IndependenceScheme::Doubling => {
                let denom = rational::pow(&rational::int(2), ctx.len - 1);
                if ctx.rank == 1 {
                    net / denom
                } else {
                    rational::pow(&rational::int(2), ctx.rank - 2) * net / denom
                }
            }
            IndependenceScheme::FirstRoundParity => {
                let first = h.round_range(1)?.len();
                halved_if_even(net, ctx.len, first)
            }
            IndependenceScheme::DoubleProportional => rational::int(2) * net / n,
            IndependenceScheme::GapSwitch { threshold } => {
                if ctx.len == 1 {
                    net.clone()
                } else {
                    let start = ctx.pos + 1 - ctx.rank;
                    let shares = h.shares();
                    let gap = (&shares[start + 1].time - &shares[start].time).abs();
                    let delta = if gap < *threshold {
                        net / rational::int(2)
                    } else {
                        net / rational::int(3)
                    };
                    families::k_pseudo(Some(2), &delta, ctx)?
                }
            }
        })
    }
}

fn halved_if_even(net: &Rational, len: usize, parity_of: usize) -> Rational {
    let base = net / rational::int(len as i64);
    if parity_of.is_multiple_of(2) {
        base / rational::int(2)
    } else {
        base
    }
}
