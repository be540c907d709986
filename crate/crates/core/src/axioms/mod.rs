//! Checkers for the seven axioms.
//!
//! A checker runs a scheme over a stream of small histories: every round
//! shape up to `n_max` shares with canonical times, then seeded random
//! histories with rational times. The first violation in stream order is
//! shrunk and returned as a [`Counterexample`]. Finding none yields
//! [`Outcome::NoCounterexampleFound`], which is evidence over the searched
//! set and nothing more.

mod inspect;
mod replay;
mod shrink;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::harness::generator::{generate_histories, HistoryGenerator};
use crate::history::{History, HistoryError, RewardConfig, ShareId};
use crate::rational::{self, Rational};
use crate::schemes::{Amount, Scheme, SchemeError};

pub use replay::Replay;
pub use shrink::single_step_shrinks;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomId {
    FixedTotalReward,
    Ordinality,
    BudgetLimit,
    AbsoluteRedistribution,
    RelativeRedistribution,
    RoundBasedRewards,
    StrictPositivity,
}

impl AxiomId {
    pub const ALL: [AxiomId; 7] = [
        AxiomId::FixedTotalReward,
        AxiomId::Ordinality,
        AxiomId::BudgetLimit,
        AxiomId::AbsoluteRedistribution,
        AxiomId::RelativeRedistribution,
        AxiomId::RoundBasedRewards,
        AxiomId::StrictPositivity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomId::FixedTotalReward => "fixed_total_reward",
            AxiomId::Ordinality => "ordinality",
            AxiomId::BudgetLimit => "budget_limit",
            AxiomId::AbsoluteRedistribution => "absolute_redistribution",
            AxiomId::RelativeRedistribution => "relative_redistribution",
            AxiomId::RoundBasedRewards => "round_based_rewards",
            AxiomId::StrictPositivity => "strict_positivity",
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown axiom {0:?}")]
pub struct UnknownAxiom(pub String);

impl FromStr for AxiomId {
    type Err = UnknownAxiom;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AxiomId::ALL
            .into_iter()
            .find(|a| a.name() == s || a.name().replace('_', "-") == s)
            .ok_or_else(|| UnknownAxiom(s.to_string()))
    }
}

impl Serialize for AxiomId {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(self.name())
    }
}

/// How hard a checker searches.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckBudget {
    /// Largest total number of shares in a generated history.
    pub n_max: usize,
    pub max_rounds: usize,
    pub random_trials: usize,
    pub seed: u64,
    /// Comparison tolerance for floating-mode schemes, relative to `R`.
    pub tolerance: f64,
    /// Reward configuration of every generated history.
    pub reward: RewardConfig,
}

impl Default for CheckBudget {
    fn default() -> Self {
        CheckBudget {
            n_max: 6,
            max_rounds: 3,
            random_trials: 500,
            seed: 0,
            tolerance: 1e-6,
            reward: RewardConfig::unit(),
        }
    }
}

impl CheckBudget {
    pub fn validate(&self) -> Result<(), CheckError> {
        if self.n_max < 2 {
            return Err(CheckError::Budget(format!("n_max must be at least 2, got {}", self.n_max)));
        }
        if self.max_rounds < 1 {
            return Err(CheckError::Budget("max_rounds must be at least 1".into()));
        }
        if !(self.tolerance.is_finite() && self.tolerance >= 0.0) {
            return Err(CheckError::Budget(format!("tolerance must be finite and >= 0, got {}", self.tolerance)));
        }
        Ok(())
    }

    /// The instance stream: all canonical shapes, then the random trials.
    pub fn instances(&self) -> Vec<History> {
        let exhaustive = HistoryGenerator::exhaustive(self.n_max, self.max_rounds, self.reward.clone());
        let random = HistoryGenerator::random(
            self.n_max,
            self.max_rounds,
            self.random_trials,
            self.seed,
            self.reward.clone(),
        );
        generate_histories(&exhaustive).chain(generate_histories(&random)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error("invalid check budget: {0}")]
    Budget(String),
}

impl From<HistoryError> for CheckError {
    fn from(e: HistoryError) -> Self {
        CheckError::Scheme(SchemeError::History(e))
    }
}

/// The second history of a counterexample, as built from the first.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Construction {
    None,
    Extend { round: usize },
    Restrict { round: usize },
    TimeShift {
        share: ShareId,
        #[serde(with = "rational::serde_fraction")]
        time: Rational,
    },
}

impl Construction {
    pub fn apply(&self, h: &History) -> Result<Option<History>, HistoryError> {
        Ok(match self {
            Construction::None => None,
            Construction::Extend { round } => Some(h.extend_round(*round)?),
            Construction::Restrict { round } => Some(h.restrict(*round)?),
            Construction::TimeShift { share, time } => Some(h.time_shift(share, time.clone())?),
        })
    }
}

/// The comparison a counterexample violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    /// `lhs = rhs` was required.
    #[serde(rename = "lhs == rhs")]
    Equal,
    /// `lhs <= rhs` was required.
    #[serde(rename = "lhs <= rhs")]
    AtMost,
    /// `lhs > 0` was required; `rhs` is zero.
    #[serde(rename = "lhs > 0")]
    Positive,
}

impl Relation {
    /// Whether `(lhs, rhs)` breaks the relation, given a tolerance already
    /// scaled to the values being compared.
    pub fn violated(self, lhs: &Amount, rhs: &Amount, tol: f64) -> bool {
        match self {
            Relation::Equal => !lhs.approx_eq(rhs, tol, 1.0),
            Relation::AtMost => match (lhs, rhs) {
                (Amount::Exact(a), Amount::Exact(b)) => a > b,
                _ => lhs.to_f64() > rhs.to_f64() + tol,
            },
            Relation::Positive => match lhs {
                Amount::Exact(a) => *a <= Rational::from_integer(0.into()),
                Amount::Float(x) => *x < tol,
            },
        }
    }
}

/// A witness that a scheme breaks an axiom.
///
/// What `lhs` and `rhs` hold, per axiom:
///
/// | axiom | shares / rounds | lhs | rhs |
/// |---|---|---|---|
/// | fixed total reward | rounds `a`, `b` | sum of round `a` | sum of round `b` |
/// | ordinality | an unshifted share `s` | `α(s, H)` | `α(s, H')` |
/// | budget limit | round `r` | sum of round `r` | `B` |
/// | absolute redistribution | `s_i`, `s_j` | `α(s_i,H) − α(s_i,H')` | same for `s_j` |
/// | relative redistribution | `s_i`, `s_j` | `α(s_i,H') / α(s_i,H)` | same for `s_j` |
/// | round based rewards | `s` | `α(s, H)` | `α(s, H\|_r)` |
/// | strict positivity | `s` | `α(s, H)` | `0` |
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub axiom: AxiomId,
    pub history: History,
    pub construction: Construction,
    pub derived: Option<History>,
    pub shares: Vec<ShareId>,
    pub rounds: Vec<usize>,
    pub relation: Relation,
    pub lhs: Amount,
    pub rhs: Amount,
}

impl Counterexample {
    /// Re-evaluates the witness share by share, away from the search path.
    pub fn replay(&self, scheme: &Scheme, tolerance: f64) -> Result<Replay, CheckError> {
        replay::replay(self, scheme, tolerance)
    }

    /// Whether some single-step shrink of the witness history still breaks
    /// the axiom. Always false for a witness returned by a checker.
    pub fn admits_shrink(&self, scheme: &Scheme, tolerance: f64) -> Result<bool, CheckError> {
        for candidate in single_step_shrinks(&self.history)? {
            if inspect::inspect(self.axiom, scheme, &candidate, tolerance)?.violation.is_some() {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

impl Serialize for Counterexample {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut histories = vec![&self.history];
        histories.extend(self.derived.as_ref());
        let mut s = ser.serialize_struct("Counterexample", 7)?;
        s.serialize_field("histories", &histories)?;
        s.serialize_field("construction", &self.construction)?;
        s.serialize_field("shares", &self.shares)?;
        s.serialize_field("rounds", &self.rounds)?;
        s.serialize_field("relation", &self.relation)?;
        s.serialize_field("lhs", &self.lhs)?;
        s.serialize_field("rhs", &self.rhs)?;
        s.end()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Fail(Box<Counterexample>),
    NoCounterexampleFound,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomVerdict {
    pub scheme: String,
    pub axiom: AxiomId,
    pub outcome: Outcome,
    /// Histories inspected, up to and including the failing one.
    pub instances: usize,
    /// PPLNS awards that were still pending and entered a comparison at
    /// their accrued value.
    pub pending_values: usize,
}

impl AxiomVerdict {
    pub fn is_fail(&self) -> bool {
        matches!(self.outcome, Outcome::Fail(_))
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match &self.outcome {
            Outcome::Fail(cx) => Some(cx),
            Outcome::NoCounterexampleFound => None,
        }
    }

    pub fn result_name(&self) -> &'static str {
        if self.is_fail() {
            "fail"
        } else {
            "no_counterexample"
        }
    }
}

impl Serialize for AxiomVerdict {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut s = ser.serialize_struct("AxiomVerdict", 6)?;
        s.serialize_field("scheme", &self.scheme)?;
        s.serialize_field("axiom", &self.axiom)?;
        s.serialize_field("result", self.result_name())?;
        s.serialize_field("instances", &self.instances)?;
        s.serialize_field("pending_values", &self.pending_values)?;
        s.serialize_field("witness", &self.counterexample())?;
        s.end()
    }
}

/// Instances are inspected in parallel in chunks of this size; the first
/// failing chunk stops the search.
const CHUNK: usize = 32;

/// Runs one checker over a prepared instance stream.
pub fn check_instances(
    axiom: AxiomId,
    scheme: &Scheme,
    instances: &[History],
    tolerance: f64,
) -> Result<AxiomVerdict, CheckError> {
    let mut pending_values = 0;
    for (chunk_index, chunk) in instances.chunks(CHUNK).enumerate() {
        let results: Vec<_> = chunk
            .par_iter()
            .map(|h| inspect::inspect(axiom, scheme, h, tolerance))
            .collect();
        for (offset, result) in results.into_iter().enumerate() {
            let found = result?;
            pending_values += found.pending;
            if let Some(cx) = found.violation {
                let cx = shrink::shrink(cx, scheme, tolerance)?;
                return Ok(AxiomVerdict {
                    scheme: scheme.to_string(),
                    axiom,
                    outcome: Outcome::Fail(Box::new(cx)),
                    instances: chunk_index * CHUNK + offset + 1,
                    pending_values,
                });
            }
        }
    }
    Ok(AxiomVerdict {
        scheme: scheme.to_string(),
        axiom,
        outcome: Outcome::NoCounterexampleFound,
        instances: instances.len(),
        pending_values,
    })
}

pub fn check(axiom: AxiomId, scheme: &Scheme, budget: &CheckBudget) -> Result<AxiomVerdict, CheckError> {
    budget.validate()?;
    check_instances(axiom, scheme, &budget.instances(), budget.tolerance)
}

pub fn check_fixed_total_reward(scheme: &Scheme, budget: &CheckBudget) -> Result<AxiomVerdict, CheckError> {
    check(AxiomId::FixedTotalReward, scheme, budget)
}

pub fn check_ordinality(scheme: &Scheme, budget: &CheckBudget) -> Result<AxiomVerdict, CheckError> {
    check(AxiomId::Ordinality, scheme, budget)
}

pub fn check_budget_limit(scheme: &Scheme, budget: &CheckBudget) -> Result<AxiomVerdict, CheckError> {
    check(AxiomId::BudgetLimit, scheme, budget)
}

pub fn check_absolute_redistribution(scheme: &Scheme, budget: &CheckBudget) -> Result<AxiomVerdict, CheckError> {
    check(AxiomId::AbsoluteRedistribution, scheme, budget)
}

pub fn check_relative_redistribution(scheme: &Scheme, budget: &CheckBudget) -> Result<AxiomVerdict, CheckError> {
    check(AxiomId::RelativeRedistribution, scheme, budget)
}

pub fn check_round_based_rewards(scheme: &Scheme, budget: &CheckBudget) -> Result<AxiomVerdict, CheckError> {
    check(AxiomId::RoundBasedRewards, scheme, budget)
}

pub fn check_strict_positivity(scheme: &Scheme, budget: &CheckBudget) -> Result<AxiomVerdict, CheckError> {
    check(AxiomId::StrictPositivity, scheme, budget)
}

/// All seven checkers over one shared instance stream.
pub fn check_all(scheme: &Scheme, budget: &CheckBudget) -> Result<BTreeMap<AxiomId, AxiomVerdict>, CheckError> {
    check_axioms(&AxiomId::ALL, scheme, budget)
}

/// A subset of the checkers over one shared instance stream.
pub fn check_axioms(
    axioms: &[AxiomId],
    scheme: &Scheme,
    budget: &CheckBudget,
) -> Result<BTreeMap<AxiomId, AxiomVerdict>, CheckError> {
    budget.validate()?;
    let instances = budget.instances();
    axioms
        .iter()
        .map(|&axiom| Ok((axiom, check_instances(axiom, scheme, &instances, budget.tolerance)?)))
        .collect()
}
