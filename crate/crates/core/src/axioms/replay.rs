//! Re-verification of a counterexample through `Scheme::award`, one share
//! at a time, with the second history rebuilt from its construction.

use super::inspect::{comparison_tolerance, scale};
use super::{AxiomId, CheckError, Construction, Counterexample};
use crate::history::{History, ShareId};
use crate::schemes::{Amount, Scheme};

/// Result of re-evaluating a counterexample.
#[derive(Debug, Clone, PartialEq)]
pub struct Replay {
    pub lhs: Amount,
    pub rhs: Amount,
    /// The recomputed sides still break the relation.
    pub violated: bool,
    /// The recomputed sides equal the recorded ones (within tolerance in
    /// floating mode), and the rebuilt second history equals the recorded one.
    pub matches_record: bool,
}

impl Replay {
    pub fn confirms(&self) -> bool {
        self.violated && self.matches_record
    }
}

fn award(scheme: &Scheme, id: &ShareId, h: &History) -> Result<Amount, CheckError> {
    Ok(scheme.award(id, h)?.into_amount())
}

fn round_sum(scheme: &Scheme, h: &History, r: usize) -> Result<Amount, CheckError> {
    let mut total = Amount::zero_like(scheme.numeric_mode());
    for share in h.round(r)?.shares {
        total = &total + &award(scheme, &share.id, h)?;
    }
    Ok(total)
}

fn share(cx: &Counterexample, i: usize) -> Result<&ShareId, CheckError> {
    cx.shares
        .get(i)
        .ok_or_else(|| CheckError::Budget(format!("counterexample for {} lists too few shares", cx.axiom)))
}

fn round(cx: &Counterexample, i: usize) -> Result<usize, CheckError> {
    cx.rounds
        .get(i)
        .copied()
        .ok_or_else(|| CheckError::Budget(format!("counterexample for {} lists too few rounds", cx.axiom)))
}

pub(super) fn replay(cx: &Counterexample, scheme: &Scheme, tolerance: f64) -> Result<Replay, CheckError> {
    let h = &cx.history;
    let derived = cx.construction.apply(h)?;
    let second = || {
        derived
            .as_ref()
            .ok_or_else(|| CheckError::Budget(format!("counterexample for {} lacks a second history", cx.axiom)))
    };
    let expected_construction = matches!(
        (cx.axiom, &cx.construction),
        (AxiomId::FixedTotalReward | AxiomId::BudgetLimit | AxiomId::StrictPositivity, Construction::None)
            | (AxiomId::Ordinality, Construction::TimeShift { .. })
            | (AxiomId::AbsoluteRedistribution | AxiomId::RelativeRedistribution, Construction::Extend { .. })
            | (AxiomId::RoundBasedRewards, Construction::Restrict { .. })
    );

    let (lhs, rhs) = match cx.axiom {
        AxiomId::FixedTotalReward => (round_sum(scheme, h, round(cx, 0)?)?, round_sum(scheme, h, round(cx, 1)?)?),
        AxiomId::BudgetLimit => (
            round_sum(scheme, h, round(cx, 0)?)?,
            Amount::Exact(h.reward().block_reward().clone()),
        ),
        AxiomId::StrictPositivity => (award(scheme, share(cx, 0)?, h)?, Amount::zero_like(scheme.numeric_mode())),
        AxiomId::Ordinality | AxiomId::RoundBasedRewards => {
            let s = share(cx, 0)?;
            if let Construction::TimeShift { share: moved, .. } = &cx.construction {
                if moved == s {
                    // the moved share itself is exempt
                    return Ok(Replay {
                        lhs: cx.lhs.clone(),
                        rhs: cx.rhs.clone(),
                        violated: false,
                        matches_record: false,
                    });
                }
            }
            (award(scheme, s, h)?, award(scheme, s, second()?)?)
        }
        AxiomId::AbsoluteRedistribution | AxiomId::RelativeRedistribution => {
            let after = second()?;
            let mut sides = Vec::with_capacity(2);
            for i in 0..2 {
                let s = share(cx, i)?;
                let before = award(scheme, s, h)?;
                let now = award(scheme, s, after)?;
                sides.push(if cx.axiom == AxiomId::AbsoluteRedistribution {
                    before.sub(&now)
                } else if before.is_zero_within(tolerance, scale(h)) {
                    // a zero base award is outside the axiom
                    return Ok(Replay {
                        lhs: cx.lhs.clone(),
                        rhs: cx.rhs.clone(),
                        violated: false,
                        matches_record: false,
                    });
                } else {
                    now.div(&before)
                });
            }
            let rhs = sides.pop().expect("two sides");
            (sides.pop().expect("two sides"), rhs)
        }
    };

    let tol = comparison_tolerance(cx.axiom, h, tolerance);
    let same_round = match cx.axiom {
        AxiomId::AbsoluteRedistribution | AxiomId::RelativeRedistribution => {
            let r = round(cx, 0)?;
            let members = h.round(r)?;
            members.len() > 1 && cx.shares.iter().all(|s| h.omega(s).ok() == Some(r))
        }
        AxiomId::RoundBasedRewards => {
            matches!(cx.construction, Construction::Restrict { round } if h.omega(share(cx, 0)?)? == round)
        }
        _ => true,
    };
    let matches_record = expected_construction
        && same_round
        && derived == cx.derived
        && lhs.approx_eq(&cx.lhs, tol, 1.0)
        && rhs.approx_eq(&cx.rhs, tol, 1.0);
    Ok(Replay {
        violated: cx.relation.violated(&lhs, &rhs, tol),
        lhs,
        rhs,
        matches_record,
    })
}
