//! Pool histories: time-stamped shares partitioned into rounds.
//!
//! A round is a maximal run of shares closed by a full solution, so the
//! partition is fully determined by the share sequence and the full-solution
//! flags. [`History`] keeps the shares in time order and materializes the
//! partition (round ranges, per-share rank and round index) at construction.
//!
//! The three constructions the fairness axioms quantify over live here too:
//! [`History::restrict`], [`History::extend_round`] and
//! [`History::time_shift`]. All of them return a fresh history; nothing is
//! mutated in place.

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ShareId(pub String);

impl ShareId {
    pub fn new(id: impl Into<String>) -> Self {
        ShareId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ShareId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ShareId {
    fn from(s: &str) -> Self {
        ShareId(s.to_string())
    }
}

/// One submitted partial solution. The hash itself is not modeled; the only
/// hash property any scheme reads is whether it also solves the block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Share {
    pub id: ShareId,
    pub time: Rational,
    pub is_full_solution: bool,
}

impl Share {
    pub fn new(id: impl Into<String>, time: Rational, is_full_solution: bool) -> Self {
        Share {
            id: ShareId::new(id),
            time,
            is_full_solution,
        }
    }
}

/// Block reward `B` and pool fee `f`; the amount shared out is `R = B - f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewardConfig {
    block_reward: Rational,
    fee: Rational,
}

impl RewardConfig {
    pub fn new(block_reward: Rational, fee: Rational) -> Result<Self, HistoryError> {
        if block_reward.is_negative() || fee.is_negative() || fee > block_reward {
            return Err(HistoryError::InvalidReward {
                block_reward: rational::to_fraction_string(&block_reward),
                fee: rational::to_fraction_string(&fee),
            });
        }
        Ok(RewardConfig { block_reward, fee })
    }

    /// `B = 1`, no fee.
    pub fn unit() -> Self {
        RewardConfig {
            block_reward: Rational::one(),
            fee: Rational::zero(),
        }
    }

    pub fn block_reward(&self) -> &Rational {
        &self.block_reward
    }

    pub fn fee(&self) -> &Rational {
        &self.fee
    }

    pub fn net(&self) -> Rational {
        &self.block_reward - &self.fee
    }
}

impl Default for RewardConfig {
    fn default() -> Self {
        RewardConfig::unit()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HistoryError {
    #[error("history has no shares")]
    EmptyHistory,
    #[error("share times must strictly increase: {prev} at position {index} is followed by {next}")]
    NonMonotoneTime {
        index: usize,
        prev: String,
        next: String,
    },
    #[error("trailing round is still open: the last share {0} is not a full solution")]
    OpenTrailingRound(ShareId),
    #[error("duplicate share id {0}")]
    DuplicateId(ShareId),
    #[error("share {0} is not part of this history")]
    UnknownShare(ShareId),
    #[error("round {round} out of range (history has {rounds} rounds)")]
    RoundOutOfRange { round: usize, rounds: usize },
    #[error("time {time} for share {share} does not lie strictly between its neighbours")]
    OrderViolated { share: ShareId, time: String },
    #[error("invalid reward: block reward {block_reward}, fee {fee} (need 0 <= fee <= block reward)")]
    InvalidReward { block_reward: String, fee: String },
}

/// The shares of one round, in time order. The last one is the full solution.
#[derive(Debug, Clone, Copy)]
pub struct RoundView<'a> {
    /// 1-based round index.
    pub index: usize,
    pub shares: &'a [Share],
}

impl<'a> RoundView<'a> {
    pub fn len(&self) -> usize {
        self.shares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shares.is_empty()
    }

    pub fn last(&self) -> &'a Share {
        self.shares.last().expect("rounds are never empty")
    }
}

/// A validated share sequence with its round partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct History {
    shares: Vec<Share>,
    reward: RewardConfig,
    rounds: Vec<Range<usize>>,
    // Per-share position data, aligned with `shares`.
    round_index: Vec<usize>,
    ranks: Vec<usize>,
    positions: HashMap<ShareId, usize>,
}

impl History {
    /// Validates a raw share sequence and materializes its rounds.
    pub fn new(shares: Vec<Share>, reward: RewardConfig) -> Result<Self, HistoryError> {
        let last = shares.last().ok_or(HistoryError::EmptyHistory)?;
        for (i, pair) in shares.windows(2).enumerate() {
            if pair[1].time <= pair[0].time {
                return Err(HistoryError::NonMonotoneTime {
                    index: i + 1,
                    prev: rational::to_fraction_string(&pair[0].time),
                    next: rational::to_fraction_string(&pair[1].time),
                });
            }
        }
        if !last.is_full_solution {
            return Err(HistoryError::OpenTrailingRound(last.id.clone()));
        }

        let mut positions = HashMap::with_capacity(shares.len());
        for (i, share) in shares.iter().enumerate() {
            if positions.insert(share.id.clone(), i).is_some() {
                return Err(HistoryError::DuplicateId(share.id.clone()));
            }
        }

        let mut rounds = Vec::new();
        let mut round_index = Vec::with_capacity(shares.len());
        let mut ranks = Vec::with_capacity(shares.len());
        let mut start = 0;
        for (i, share) in shares.iter().enumerate() {
            round_index.push(rounds.len() + 1);
            ranks.push(i - start + 1);
            if share.is_full_solution {
                rounds.push(start..i + 1);
                start = i + 1;
            }
        }

        Ok(History {
            shares,
            reward,
            rounds,
            round_index,
            ranks,
            positions,
        })
    }

    /// Builds a history with the given round lengths, ids `s1..sn` and
    /// canonical times `1..n`.
    pub fn from_round_lengths(lengths: &[usize], reward: RewardConfig) -> Result<Self, HistoryError> {
        let total: usize = lengths.iter().sum();
        let times = (1..=total as i64).map(rational::int).collect();
        Self::from_round_lengths_with_times(lengths, times, reward)
    }

    pub fn from_round_lengths_with_times(
        lengths: &[usize],
        times: Vec<Rational>,
        reward: RewardConfig,
    ) -> Result<Self, HistoryError> {
        let mut shares = Vec::with_capacity(times.len());
        let mut times = times.into_iter();
        for &len in lengths {
            for rank in 1..=len {
                let Some(time) = times.next() else {
                    return Err(HistoryError::EmptyHistory);
                };
                let id = format!("s{}", shares.len() + 1);
                shares.push(Share::new(id, time, rank == len));
            }
        }
        Self::new(shares, reward)
    }

    pub fn shares(&self) -> &[Share] {
        &self.shares
    }

    pub fn reward(&self) -> &RewardConfig {
        &self.reward
    }

    pub fn len(&self) -> usize {
        self.shares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shares.is_empty()
    }

    pub fn round_count(&self) -> usize {
        self.rounds.len()
    }

    pub fn round_lengths(&self) -> Vec<usize> {
        self.rounds.iter().map(|r| r.len()).collect()
    }

    pub fn rounds(&self) -> impl Iterator<Item = RoundView<'_>> + '_ {
        self.rounds.iter().enumerate().map(move |(i, range)| RoundView {
            index: i + 1,
            shares: &self.shares[range.clone()],
        })
    }

    /// 1-based round lookup.
    pub fn round(&self, r: usize) -> Result<RoundView<'_>, HistoryError> {
        let range = self.round_range(r)?;
        Ok(RoundView {
            index: r,
            shares: &self.shares[range],
        })
    }

    /// Position range (0-based, into [`History::shares`]) of round `r`.
    pub fn round_range(&self, r: usize) -> Result<Range<usize>, HistoryError> {
        if r == 0 || r > self.rounds.len() {
            return Err(HistoryError::RoundOutOfRange {
                round: r,
                rounds: self.rounds.len(),
            });
        }
        Ok(self.rounds[r - 1].clone())
    }

    pub fn position(&self, id: &ShareId) -> Result<usize, HistoryError> {
        self.positions
            .get(id)
            .copied()
            .ok_or_else(|| HistoryError::UnknownShare(id.clone()))
    }

    pub fn share(&self, id: &ShareId) -> Result<&Share, HistoryError> {
        Ok(&self.shares[self.position(id)?])
    }

    /// `P(s)`: the round containing `s`.
    pub fn round_of(&self, id: &ShareId) -> Result<RoundView<'_>, HistoryError> {
        let pos = self.position(id)?;
        self.round(self.round_index[pos])
    }

    /// `ρ(s)`: 1-based rank of `s` inside its round.
    pub fn rank(&self, id: &ShareId) -> Result<usize, HistoryError> {
        Ok(self.ranks[self.position(id)?])
    }

    /// `Ω(s)`: 1-based index of the round containing `s`.
    pub fn omega(&self, id: &ShareId) -> Result<usize, HistoryError> {
        Ok(self.round_index[self.position(id)?])
    }

    pub fn rank_at(&self, pos: usize) -> usize {
        self.ranks[pos]
    }

    pub fn omega_at(&self, pos: usize) -> usize {
        self.round_index[pos]
    }

    pub fn round_len_at(&self, pos: usize) -> usize {
        self.rounds[self.round_index[pos] - 1].len()
    }

    /// `H|_r`: the single-round history made of round `r` alone.
    pub fn restrict(&self, r: usize) -> Result<History, HistoryError> {
        let range = self.round_range(r)?;
        History::new(self.shares[range].to_vec(), self.reward.clone())
    }

    /// Appends a fresh share `s*` as the new last share of round `r`.
    ///
    /// `s*` takes over the full-solution flag and sits at the midpoint between
    /// the old last share of the round and the first share of the next round,
    /// or one time unit after the old last share when `r` is the final round.
    pub fn extend_round(&self, r: usize) -> Result<History, HistoryError> {
        let range = self.round_range(r)?;
        let last = range.end - 1;
        let time = match self.shares.get(range.end) {
            Some(next) => (&self.shares[last].time + &next.time) / rational::int(2),
            None => &self.shares[last].time + Rational::one(),
        };

        let mut shares = Vec::with_capacity(self.shares.len() + 1);
        shares.extend_from_slice(&self.shares[..range.end]);
        shares[last].is_full_solution = false;
        shares.push(Share {
            id: self.fresh_id("s*"),
            time,
            is_full_solution: true,
        });
        shares.extend_from_slice(&self.shares[range.end..]);
        History::new(shares, self.reward.clone())
    }

    /// Moves share `id` to `new_time`, which must keep the submission order.
    pub fn time_shift(&self, id: &ShareId, new_time: Rational) -> Result<History, HistoryError> {
        let pos = self.position(id)?;
        let after_prev = pos == 0 || self.shares[pos - 1].time < new_time;
        let before_next = self
            .shares
            .get(pos + 1)
            .is_none_or(|next| new_time < next.time);
        if !(after_prev && before_next) {
            return Err(HistoryError::OrderViolated {
                share: id.clone(),
                time: rational::to_fraction_string(&new_time),
            });
        }
        let mut shares = self.shares.clone();
        shares[pos].time = new_time;
        History::new(shares, self.reward.clone())
    }

    /// Same shares with a different reward configuration.
    pub fn with_reward(&self, reward: RewardConfig) -> History {
        History {
            reward,
            ..self.clone()
        }
    }

    fn fresh_id(&self, base: &str) -> ShareId {
        let mut candidate = ShareId::new(base);
        let mut n = 2;
        while self.positions.contains_key(&candidate) {
            candidate = ShareId::new(format!("{base}{n}"));
            n += 1;
        }
        candidate
    }
}

/// JSON interchange form of a history.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HistoryDocument {
    #[serde(with = "rational::serde_fraction")]
    pub block_reward: Rational,
    #[serde(with = "rational::serde_fraction")]
    pub fee: Rational,
    pub shares: Vec<ShareRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShareRecord {
    pub id: String,
    #[serde(with = "rational::serde_fraction")]
    pub time: Rational,
    pub full: bool,
}

impl From<&History> for HistoryDocument {
    fn from(h: &History) -> Self {
        HistoryDocument {
            block_reward: h.reward.block_reward.clone(),
            fee: h.reward.fee.clone(),
            shares: h
                .shares
                .iter()
                .map(|s| ShareRecord {
                    id: s.id.0.clone(),
                    time: s.time.clone(),
                    full: s.is_full_solution,
                })
                .collect(),
        }
    }
}

impl TryFrom<HistoryDocument> for History {
    type Error = HistoryError;

    fn try_from(doc: HistoryDocument) -> Result<Self, Self::Error> {
        let reward = RewardConfig::new(doc.block_reward, doc.fee)?;
        let shares = doc
            .shares
            .into_iter()
            .map(|r| Share::new(r.id, r.time, r.full))
            .collect();
        History::new(shares, reward)
    }
}

impl Serialize for History {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        HistoryDocument::from(self).serialize(ser)
    }
}

impl<'de> Deserialize<'de> for History {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let doc = HistoryDocument::deserialize(de)?;
        History::try_from(doc).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn shape(lengths: &[usize]) -> History {
        History::from_round_lengths(lengths, RewardConfig::unit()).unwrap()
    }

    fn id(s: &str) -> ShareId {
        ShareId::from(s)
    }

    /// Rounds of the illustrative history: full solutions at s10, s150,
    /// s589 with intermediate rounds filling the gaps, and a final round.
    fn illustrative_history() -> History {
        // 10, 140, then 413 shares (s151..s563) as one round, then s564..s589,
        // then a final round s590..s600.
        shape(&[10, 140, 413, 26, 11])
    }

    #[test]
    fn minimal_history_has_one_round() {
        let h = History::new(
            vec![Share::new("s1", int(1), false), Share::new("s2", int(2), true)],
            RewardConfig::unit(),
        )
        .unwrap();
        assert_eq!(h.round_lengths(), vec![2]);
    }

    #[test]
    fn validation_errors() {
        let cfg = RewardConfig::unit();
        let out_of_order = vec![Share::new("s1", int(2), false), Share::new("s2", int(1), true)];
        assert!(matches!(
            History::new(out_of_order, cfg.clone()),
            Err(HistoryError::NonMonotoneTime { .. })
        ));
        let tie = vec![Share::new("s1", int(1), false), Share::new("s2", int(1), true)];
        assert!(matches!(
            History::new(tie, cfg.clone()),
            Err(HistoryError::NonMonotoneTime { .. })
        ));
        let open = vec![Share::new("s1", int(1), true), Share::new("s2", int(2), false)];
        assert!(matches!(
            History::new(open, cfg.clone()),
            Err(HistoryError::OpenTrailingRound(_))
        ));
        assert_eq!(History::new(vec![], cfg.clone()), Err(HistoryError::EmptyHistory));
        let dup = vec![Share::new("a", int(1), false), Share::new("a", int(2), true)];
        assert!(matches!(History::new(dup, cfg), Err(HistoryError::DuplicateId(_))));
    }

    #[test]
    fn reward_config_bounds() {
        assert!(RewardConfig::new(int(1), int(2)).is_err());
        assert!(RewardConfig::new(int(1), int(-1)).is_err());
        let cfg = RewardConfig::new(int(10), ratio(5, 2)).unwrap();
        assert_eq!(cfg.net(), ratio(15, 2));
    }

    #[test]
    fn illustrative_round_lengths_and_ranks() {
        let h = illustrative_history();
        let lengths = h.round_lengths();
        assert_eq!(&lengths[..2], &[10, 140]);
        let r = h.round_of(&id("s564")).unwrap();
        assert_eq!(r.len(), 26);
        assert_eq!(r.shares[0].id, id("s564"));
        assert_eq!(r.last().id, id("s589"));
        assert_eq!(h.rank(&id("s564")).unwrap(), 1);
        assert_eq!(h.rank(&id("s589")).unwrap(), 26);
        let second = h.round_of(&id("s11")).unwrap();
        assert_eq!((second.index, second.len()), (2, 140));
    }

    #[test]
    fn single_share_history() {
        let h = shape(&[1]);
        let r = h.round_of(&id("s1")).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(h.rank(&id("s1")).unwrap(), 1);
        assert_eq!(h.omega(&id("s1")).unwrap(), 1);
    }

    #[test]
    fn omega_on_pplns_example_shape() {
        let h = shape(&[5, 1, 1, 1, 12]);
        assert_eq!(h.omega(&id("s5")).unwrap(), 1);
        assert_eq!(h.omega(&id("s6")).unwrap(), 2);
        assert_eq!(h.omega(&id("s1")).unwrap(), 1);
    }

    #[test]
    fn unknown_share() {
        let h = shape(&[2]);
        assert!(matches!(h.rank(&id("zz")), Err(HistoryError::UnknownShare(_))));
        assert!(matches!(h.omega(&id("zz")), Err(HistoryError::UnknownShare(_))));
        assert!(h.round_of(&id("zz")).is_err());
    }

    #[test]
    fn restriction() {
        let h = shape(&[2, 3, 1]);
        let r2 = h.restrict(2).unwrap();
        assert_eq!(r2.round_lengths(), vec![3]);
        let ids: Vec<_> = r2.shares().iter().map(|s| s.id.as_str()).collect();
        assert_eq!(ids, ["s3", "s4", "s5"]);
        assert_eq!(r2.reward(), h.reward());
        let single = shape(&[4]);
        assert_eq!(single.restrict(1).unwrap(), single);
        assert!(matches!(h.restrict(0), Err(HistoryError::RoundOutOfRange { .. })));
        assert!(matches!(h.restrict(4), Err(HistoryError::RoundOutOfRange { .. })));
    }

    #[test]
    fn extension_moves_full_solution_flag() {
        let h = shape(&[2, 3]);
        let e = h.extend_round(1).unwrap();
        assert_eq!(e.round_lengths(), vec![3, 3]);
        let star = &e.shares()[2];
        assert_eq!(star.id, id("s*"));
        assert!(star.is_full_solution);
        assert_eq!(star.time, ratio(5, 2));
        assert!(!e.shares()[1].is_full_solution);
        assert_eq!(e.restrict(2).unwrap(), h.restrict(2).unwrap());

        let last = h.extend_round(2).unwrap();
        assert_eq!(last.shares().last().unwrap().time, int(6));

        let one = shape(&[1, 2]).extend_round(1).unwrap();
        assert_eq!(one.round_lengths(), vec![2, 2]);
        assert!(h.extend_round(3).is_err());
    }

    #[test]
    fn repeated_extension_gets_fresh_ids() {
        let h = shape(&[1]).extend_round(1).unwrap().extend_round(1).unwrap();
        let ids: Vec<_> = h.shares().iter().map(|s| s.id.as_str()).collect();
        assert_eq!(ids, ["s1", "s*", "s*2"]);
    }

    #[test]
    fn time_shift_bounds() {
        let h = shape(&[2]);
        let shifted = h.time_shift(&id("s1"), ratio(3, 2)).unwrap();
        assert_eq!(shifted.shares()[0].time, ratio(3, 2));
        assert!(matches!(
            h.time_shift(&id("s1"), ratio(5, 2)),
            Err(HistoryError::OrderViolated { .. })
        ));
        // endpoints are only bounded on their inner side
        assert!(h.time_shift(&id("s1"), int(-100)).is_ok());
        assert!(h.time_shift(&id("s2"), int(100)).is_ok());
        assert!(h.time_shift(&id("s2"), int(1)).is_err());
    }

    #[test]
    fn shifting_kth_shares_to_common_times_aligns_equal_rounds() {
        let a = History::from_round_lengths_with_times(
            &[3],
            vec![int(1), int(2), int(5)],
            RewardConfig::unit(),
        )
        .unwrap();
        let b = History::from_round_lengths_with_times(
            &[3],
            vec![ratio(1, 2), int(3), int(4)],
            RewardConfig::unit(),
        )
        .unwrap();
        // first share to the earlier time, then each later share to the
        // later of the two, which keeps every intermediate history valid
        let mut ha = a.clone();
        let mut hb = b.clone();
        for k in 0..3 {
            let ta = &ha.shares()[k].time;
            let tb = &hb.shares()[k].time;
            let target = if k == 0 { ta.min(tb).clone() } else { ta.max(tb).clone() };
            let sid = ha.shares()[k].id.clone();
            ha = ha.time_shift(&sid, target.clone()).unwrap();
            hb = hb.time_shift(&sid, target).unwrap();
        }
        assert_eq!(ha, hb);
    }

    #[test]
    fn json_round_trip_and_format() {
        let h = History::from_round_lengths_with_times(
            &[1, 2],
            vec![int(1), ratio(3, 2), int(2)],
            RewardConfig::new(int(6), ratio(1, 2)).unwrap(),
        )
        .unwrap();
        let text = serde_json::to_string(&h).unwrap();
        assert!(text.contains("\"block_reward\":\"6/1\""));
        assert!(text.contains("\"time\":\"3/2\""));
        let back: History = serde_json::from_str(&text).unwrap();
        assert_eq!(back, h);

        let open = r#"{"block_reward":"1","fee":"0","shares":[{"id":"a","time":"1","full":false}]}"#;
        let err = serde_json::from_str::<History>(open).unwrap_err();
        assert!(err.to_string().contains("still open"));
    }

    fn arb_lengths() -> impl Strategy<Value = Vec<usize>> {
        prop::collection::vec(1usize..6, 1..5)
    }

    proptest! {
        #[test]
        fn rounds_concatenate_to_shares(lengths in arb_lengths()) {
            let h = shape(&lengths);
            let joined: Vec<Share> = h.rounds().flat_map(|r| r.shares.to_vec()).collect();
            prop_assert_eq!(joined.as_slice(), h.shares());
            for r in h.rounds() {
                prop_assert!(r.last().is_full_solution);
                prop_assert_eq!(r.shares.iter().filter(|s| s.is_full_solution).count(), 1);
            }
        }

        #[test]
        fn rank_and_omega_step_consistently(lengths in arb_lengths()) {
            let h = shape(&lengths);
            for i in 1..h.len() {
                let same_round = h.rank_at(i) == h.rank_at(i - 1) + 1 && h.omega_at(i) == h.omega_at(i - 1);
                let new_round = h.rank_at(i) == 1 && h.omega_at(i) == h.omega_at(i - 1) + 1;
                prop_assert!(same_round ^ new_round);
            }
            for (pos, s) in h.shares().iter().enumerate() {
                let len = h.round_of(&s.id).unwrap().len();
                prop_assert!(h.rank_at(pos) >= 1 && h.rank_at(pos) <= len);
            }
        }

        #[test]
        fn extension_then_restriction(lengths in arb_lengths(), pick in 0usize..8) {
            let h = shape(&lengths);
            let r = pick % h.round_count() + 1;
            let e = h.extend_round(r).unwrap();
            prop_assert_eq!(e.restrict(r).unwrap().len(), lengths[r - 1] + 1);
            for k in 1..=h.round_count() {
                if k != r {
                    prop_assert_eq!(e.restrict(k).unwrap(), h.restrict(k).unwrap());
                }
            }
        }

        #[test]
        fn time_shift_preserves_structure(lengths in arb_lengths(), pick in 0usize..32, num in 1i64..4) {
            let h = shape(&lengths);
            let pos = pick % h.len();
            let sid = h.shares()[pos].id.clone();
            // canonical times are integers one apart
            let new_time = &h.shares()[pos].time - ratio(1, 2) + ratio(num, 4);
            let shifted = h.time_shift(&sid, new_time).unwrap();
            prop_assert_eq!(shifted.round_lengths(), h.round_lengths());
            for i in 0..h.len() {
                prop_assert_eq!(shifted.rank_at(i), h.rank_at(i));
                prop_assert_eq!(shifted.omega_at(i), h.omega_at(i));
            }
        }
    }
}
