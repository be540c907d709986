//! Violation search on a single history, through the bulk evaluation path.

use super::{AxiomId, CheckError, Construction, Counterexample, Relation};
use crate::history::History;
use crate::rational::{self, Rational};
use crate::schemes::{Amount, Award, NumericMode, Scheme};

pub(super) struct Inspection {
    pub violation: Option<Counterexample>,
    /// Pending awards that took part in a comparison.
    pub pending: usize,
}

/// Unit for floating-mode tolerances: `R`, falling back to `B`, then 1.
pub(super) fn scale(h: &History) -> f64 {
    let net = rational::to_f64(&h.reward().net());
    let block = rational::to_f64(h.reward().block_reward());
    [net, block].into_iter().find(|x| *x > 0.0).unwrap_or(1.0)
}

/// Tolerance for the values compared under `axiom`. Ratios are unitless,
/// everything else is an amount of reward.
pub(super) fn comparison_tolerance(axiom: AxiomId, h: &History, tolerance: f64) -> f64 {
    match axiom {
        AxiomId::RelativeRedistribution => tolerance,
        _ => tolerance * scale(h),
    }
}

/// Fractions of the allowed interval tried as new times in time-shifts.
pub(super) const SHIFT_FRACTIONS: [(i64, i64); 3] = [(1, 4), (1, 2), (3, 4)];

/// The open interval a share may be moved within: between its neighbours,
/// and one time unit past the first or last share.
pub(super) fn shift_interval(h: &History, pos: usize) -> (Rational, Rational) {
    let shares = h.shares();
    let one = rational::int(1);
    let lo = match pos.checked_sub(1) {
        Some(prev) => shares[prev].time.clone(),
        None => &shares[0].time - &one,
    };
    let hi = match shares.get(pos + 1) {
        Some(next) => next.time.clone(),
        None => &shares[pos].time + &one,
    };
    (lo, hi)
}

fn evaluate(scheme: &Scheme, h: &History) -> Result<Vec<Award>, CheckError> {
    Ok(scheme.awards(h)?)
}

fn count_pending<'a>(awards: impl IntoIterator<Item = &'a Award>) -> usize {
    awards.into_iter().filter(|a| a.is_pending()).count()
}

fn round_sum(mode: NumericMode, awards: &[Award], h: &History, r: usize) -> Amount {
    let range = h.round_range(r).expect("round in range");
    Amount::sum(mode, awards[range].iter().map(Award::amount))
}

pub(super) fn inspect(axiom: AxiomId, scheme: &Scheme, h: &History, tolerance: f64) -> Result<Inspection, CheckError> {
    let tol = comparison_tolerance(axiom, h, tolerance);
    let mode = scheme.numeric_mode();
    let awards = evaluate(scheme, h)?;
    let mut pending = 0;
    let cx = |construction: Construction,
              derived: Option<History>,
              shares: Vec<usize>,
              rounds: Vec<usize>,
              relation: Relation,
              lhs: Amount,
              rhs: Amount| {
        // shares are given by position in `h`
        let ids = shares.iter().map(|&p| h.shares()[p].id.clone()).collect();
        Counterexample {
            axiom,
            history: h.clone(),
            construction,
            derived,
            shares: ids,
            rounds,
            relation,
            lhs,
            rhs,
        }
    };

    let violation = match axiom {
        AxiomId::FixedTotalReward => {
            pending += count_pending(&awards);
            let first = round_sum(mode, &awards, h, 1);
            (2..=h.round_count()).find_map(|r| {
                let other = round_sum(mode, &awards, h, r);
                Relation::Equal
                    .violated(&first, &other, tol)
                    .then(|| cx(Construction::None, None, vec![], vec![1, r], Relation::Equal, first.clone(), other))
            })
        }
        AxiomId::BudgetLimit => {
            pending += count_pending(&awards);
            let bound = Amount::Exact(h.reward().block_reward().clone());
            (1..=h.round_count()).find_map(|r| {
                let sum = round_sum(mode, &awards, h, r);
                Relation::AtMost
                    .violated(&sum, &bound, tol)
                    .then(|| cx(Construction::None, None, vec![], vec![r], Relation::AtMost, sum, bound.clone()))
            })
        }
        AxiomId::StrictPositivity => {
            pending += count_pending(&awards);
            let zero = Amount::zero_like(mode);
            awards.iter().enumerate().find_map(|(pos, a)| {
                Relation::Positive.violated(a.amount(), &zero, tol).then(|| {
                    cx(
                        Construction::None,
                        None,
                        vec![pos],
                        vec![h.omega_at(pos)],
                        Relation::Positive,
                        a.amount().clone(),
                        zero.clone(),
                    )
                })
            })
        }
        AxiomId::RoundBasedRewards => {
            let mut found = None;
            // with one round, H|_1 is H itself
            if h.round_count() > 1 {
                'rounds: for r in 1..=h.round_count() {
                    let range = h.round_range(r)?;
                    let restricted = h.restrict(r)?;
                    let local = evaluate(scheme, &restricted)?;
                    pending += count_pending(&awards[range.clone()]) + count_pending(&local);
                    for (offset, pos) in range.enumerate() {
                        let (a, b) = (awards[pos].amount(), local[offset].amount());
                        if Relation::Equal.violated(a, b, tol) {
                            found = Some(cx(
                                Construction::Restrict { round: r },
                                Some(restricted),
                                vec![pos],
                                vec![r],
                                Relation::Equal,
                                a.clone(),
                                b.clone(),
                            ));
                            break 'rounds;
                        }
                    }
                }
            }
            found
        }
        AxiomId::AbsoluteRedistribution | AxiomId::RelativeRedistribution => {
            let mut found = None;
            'rounds: for r in 1..=h.round_count() {
                let range = h.round_range(r)?;
                if range.len() < 2 {
                    continue;
                }
                let extended = h.extend_round(r)?;
                let after = evaluate(scheme, &extended)?;
                // positions in P_r are unchanged by the extension
                pending += count_pending(&awards[range.clone()]) + count_pending(&after[range.clone()]);
                let values: Vec<(usize, Amount)> = range
                    .filter_map(|pos| {
                        let (before, now) = (awards[pos].amount(), after[pos].amount());
                        match axiom {
                            AxiomId::AbsoluteRedistribution => Some((pos, before.sub(now))),
                            _ => (!before.is_zero_within(tolerance, scale(h))).then(|| (pos, now.div(before))),
                        }
                    })
                    .collect();
                if let Some((first_pos, first)) = values.first() {
                    for (pos, value) in &values[1..] {
                        if Relation::Equal.violated(first, value, tol) {
                            found = Some(cx(
                                Construction::Extend { round: r },
                                Some(extended),
                                vec![*first_pos, *pos],
                                vec![r],
                                Relation::Equal,
                                first.clone(),
                                value.clone(),
                            ));
                            break 'rounds;
                        }
                    }
                }
            }
            found
        }
        AxiomId::Ordinality => {
            let mut found = None;
            pending += count_pending(&awards);
            'shares: for pos in 0..h.len() {
                let (lo, hi) = shift_interval(h, pos);
                let id = &h.shares()[pos].id;
                for (num, den) in SHIFT_FRACTIONS {
                    let time = &lo + (&hi - &lo) * rational::ratio(num, den);
                    if time == h.shares()[pos].time {
                        continue;
                    }
                    let shifted = h.time_shift(id, time.clone())?;
                    let after = evaluate(scheme, &shifted)?;
                    pending += count_pending(&after);
                    for other in (0..h.len()).filter(|&o| o != pos) {
                        let (a, b) = (awards[other].amount(), after[other].amount());
                        if Relation::Equal.violated(a, b, tol) {
                            found = Some(cx(
                                Construction::TimeShift { share: id.clone(), time },
                                Some(shifted),
                                vec![other],
                                vec![h.omega_at(other)],
                                Relation::Equal,
                                a.clone(),
                                b.clone(),
                            ));
                            break 'shares;
                        }
                    }
                }
            }
            found
        }
    };
    Ok(Inspection { violation, pending })
}
