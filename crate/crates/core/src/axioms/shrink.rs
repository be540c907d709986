//! Greedy witness shrinking.

use super::inspect::inspect;
use super::{CheckError, Counterexample};
use crate::history::{History, HistoryError};
use crate::schemes::Scheme;

/// Every history one step smaller than `h`: without its last round, or with
/// one share removed from a round of two or more shares. Removing a round's
/// full solution hands the flag to the share before it.
pub fn single_step_shrinks(h: &History) -> Result<Vec<History>, HistoryError> {
    let mut out = Vec::new();
    if h.round_count() > 1 {
        let end = h.round_range(h.round_count() - 1)?.end;
        out.push(History::new(h.shares()[..end].to_vec(), h.reward().clone())?);
    }
    for r in 1..=h.round_count() {
        let range = h.round_range(r)?;
        if range.len() < 2 {
            continue;
        }
        for pos in range.clone() {
            let mut shares = h.shares().to_vec();
            let removed = shares.remove(pos);
            if removed.is_full_solution {
                shares[pos - 1].is_full_solution = true;
            }
            out.push(History::new(shares, h.reward().clone())?);
        }
    }
    Ok(out)
}

/// Replaces the witness by a smaller violating history until no single-step
/// shrink violates the axiom any more. Candidates are tried in the order of
/// [`single_step_shrinks`].
pub(super) fn shrink(mut cx: Counterexample, scheme: &Scheme, tolerance: f64) -> Result<Counterexample, CheckError> {
    'outer: loop {
        for candidate in single_step_shrinks(&cx.history)? {
            if let Some(smaller) = inspect(cx.axiom, scheme, &candidate, tolerance)?.violation {
                cx = smaller;
                continue 'outer;
            }
        }
        return Ok(cx);
    }
}
