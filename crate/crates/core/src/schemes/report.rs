use serde::Serialize;

use super::{Amount, Scheme, SchemeError};
use crate::history::{History, ShareId};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PayoutEntry {
    pub id: ShareId,
    pub round: usize,
    pub rank: usize,
    pub award: Amount,
    /// PPLNS only: the window runs past the history, `award` is what has
    /// accrued so far.
    pub pending: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundTotal {
    pub round: usize,
    pub length: usize,
    pub sum: Amount,
    pub pending: bool,
}

/// Awards of every share of a history with per-round sums and a total.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PayoutReport {
    pub scheme: String,
    pub entries: Vec<PayoutEntry>,
    pub rounds: Vec<RoundTotal>,
    pub total: Amount,
}

impl PayoutReport {
    pub fn compute(scheme: &Scheme, h: &History) -> Result<Self, SchemeError> {
        let mode = scheme.numeric_mode();
        let awards = scheme.awards(h)?;
        let entries: Vec<PayoutEntry> = h
            .shares()
            .iter()
            .zip(awards)
            .enumerate()
            .map(|(pos, (share, award))| PayoutEntry {
                id: share.id.clone(),
                round: h.omega_at(pos),
                rank: h.rank_at(pos),
                pending: award.is_pending(),
                award: award.into_amount(),
            })
            .collect();
        let rounds = (1..=h.round_count())
            .map(|r| {
                let range = h.round_range(r).expect("round in range");
                let members = &entries[range.clone()];
                RoundTotal {
                    round: r,
                    length: range.len(),
                    sum: Amount::sum(mode, members.iter().map(|e| &e.award)),
                    pending: members.iter().any(|e| e.pending),
                }
            })
            .collect();
        let total = Amount::sum(mode, entries.iter().map(|e| &e.award));
        Ok(PayoutReport {
            scheme: scheme.to_string(),
            entries,
            rounds,
            total,
        })
    }

    pub fn has_pending(&self) -> bool {
        self.entries.iter().any(|e| e.pending)
    }
}
