//! Slush: score-based rewards with exponential decay in submission time.
//!
//! When round `j` closes at `s̄_j`, every share submitted so far gets the
//! score `exp((τ(s) - τ(s̄_j))/λ)` normalized over all shares with
//! `τ <= τ(s̄_j)`. A share is paid `R` times the sum of its scores from its
//! own round to the last recorded round.

use crate::history::History;
use crate::rational;

pub const SLUSH_DEFAULT_LAMBDA: f64 = 1200.0;

fn decay(h: &History, pos: usize, close: usize, lambda: f64) -> f64 {
    let shares = h.shares();
    let dt = &shares[pos].time - &shares[close].time;
    (rational::to_f64(&dt) / lambda).exp()
}

/// Direct double sum for a single share.
pub(super) fn award(lambda: f64, pos: usize, h: &History) -> f64 {
    let net = rational::to_f64(&h.reward().net());
    let mut total = 0.0;
    for round in h.omega_at(pos)..=h.round_count() {
        let close = h.round_range(round).expect("round in range").end - 1;
        let numer = decay(h, pos, close, lambda);
        let denom: f64 = (0..=close).map(|p| decay(h, p, close, lambda)).sum();
        total += numer / denom;
    }
    net * total
}

/// All awards, normalizing each closing round once.
pub(super) fn awards(lambda: f64, h: &History) -> Vec<f64> {
    let net = rational::to_f64(&h.reward().net());
    let mut out = vec![0.0; h.len()];
    for round in 1..=h.round_count() {
        let close = h.round_range(round).expect("round in range").end - 1;
        let weights: Vec<f64> = (0..=close).map(|p| decay(h, p, close, lambda)).collect();
        let denom: f64 = weights.iter().sum();
        for (pos, w) in weights.iter().enumerate() {
            if h.omega_at(pos) <= round {
                out[pos] += w / denom;
            }
        }
    }
    out.iter_mut().for_each(|x| *x *= net);
    out
}

/// `score(s, j)` for every share with `τ(s) <= τ(s̄_j)`, in time order.
/// The returned scores form a probability distribution.
pub fn slush_scores(lambda: f64, h: &History, round: usize) -> Result<Vec<f64>, crate::history::HistoryError> {
    let close = h.round_range(round)?.end - 1;
    let weights: Vec<f64> = (0..=close).map(|p| decay(h, p, close, lambda)).collect();
    let denom: f64 = weights.iter().sum();
    Ok(weights.into_iter().map(|w| w / denom).collect())
}
