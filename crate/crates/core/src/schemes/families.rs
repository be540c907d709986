//! Proportional, the absolute-fair and relative-fair families, and the
//! k-pseudo-proportional schemes at their intersection.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{SchemeError, ShareContext};
use crate::rational::{self, Rational};

/// A finite weight table `ε(1..=N_max)` with `ε(1) = 1` and every entry in
/// `[0, 1]`. Rounds longer than `N_max` cannot be evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct EpsilonTable {
    values: Vec<Rational>,
}

impl EpsilonTable {
    pub const DEFAULT_MAX_LEN: usize = 64;

    pub fn new(values: Vec<Rational>) -> Result<Self, SchemeError> {
        let first = values
            .first()
            .ok_or_else(|| SchemeError::InvalidEpsilon("table is empty".into()))?;
        if !first.is_one() {
            return Err(SchemeError::InvalidEpsilon(format!("eps(1) must be 1, got {first}")));
        }
        for (i, v) in values.iter().enumerate() {
            if v.is_negative() || *v > Rational::one() {
                return Err(SchemeError::InvalidEpsilon(format!(
                    "eps({}) = {v} is outside [0, 1]",
                    i + 1
                )));
            }
        }
        Ok(EpsilonTable { values })
    }

    /// `ε(j) = 1/j`, the table that reproduces the proportional scheme.
    pub fn harmonic(max_len: usize) -> Self {
        EpsilonTable {
            values: (1..=max_len as i64).map(|j| rational::ratio(1, j)).collect(),
        }
    }

    /// `ε(j) = (r-1) r^(j-1) / (r^j - 1)`: the relative-fair table of the
    /// constrained geometric scheme. `ε(1) = 1` falls out of the formula.
    pub fn constrained_geometric(r: &Rational, max_len: usize) -> Result<Self, SchemeError> {
        super::pool::check_ratio(r)?;
        let values = (1..=max_len)
            .map(|j| (r - Rational::one()) * rational::pow(r, j - 1) / (rational::pow(r, j) - Rational::one()))
            .collect();
        Self::new(values)
    }

    pub fn max_len(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// `ε(j)`, 1-based.
    pub fn get(&self, j: usize) -> &Rational {
        &self.values[j - 1]
    }

    /// `Σ_{i=j+1}^{N_max} ε(i)/(i-1)`.
    pub fn absolute_tail(&self, j: usize) -> Rational {
        (j + 1..=self.max_len())
            .map(|i| self.get(i) / rational::int(i as i64 - 1))
            .fold(Rational::zero(), |acc, x| acc + x)
    }

    /// Checks `ε(j) >= Σ_{i>j} ε(i)/(i-1)` for every `j` up to `N_max`, the
    /// truncated form of the absolute-fair side condition.
    pub fn check_absolute(&self) -> Result<(), SchemeError> {
        let mut tail = Rational::zero();
        for j in (1..=self.max_len()).rev() {
            if *self.get(j) < tail {
                return Err(SchemeError::InvalidEpsilon(format!(
                    "eps({j}) = {} is below the tail sum {tail}",
                    self.get(j)
                )));
            }
            if j > 1 {
                tail += self.get(j) / rational::int(j as i64 - 1);
            }
        }
        Ok(())
    }

    fn ensure_covers(&self, len: usize) -> Result<(), SchemeError> {
        if len > self.max_len() {
            return Err(SchemeError::RoundTooLong {
                len,
                max: self.max_len(),
            });
        }
        Ok(())
    }

    pub(crate) fn to_spec_list(&self) -> String {
        self.values
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("|")
    }
}

impl TryFrom<Vec<String>> for EpsilonTable {
    type Error = SchemeError;

    fn try_from(raw: Vec<String>) -> Result<Self, Self::Error> {
        let values = raw
            .iter()
            .map(|s| rational::parse(s).map_err(|e| SchemeError::InvalidEpsilon(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        EpsilonTable::new(values)
    }
}

impl From<EpsilonTable> for Vec<String> {
    fn from(t: EpsilonTable) -> Self {
        t.values.iter().map(rational::to_fraction_string).collect()
    }
}

/// An [`EpsilonTable`] known to satisfy the absolute-fair side condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbsoluteFairEpsilon(EpsilonTable);

impl AbsoluteFairEpsilon {
    pub fn new(table: EpsilonTable) -> Result<Self, SchemeError> {
        table.check_absolute()?;
        Ok(AbsoluteFairEpsilon(table))
    }

    pub fn table(&self) -> &EpsilonTable {
        &self.0
    }
}

pub(super) fn proportional(ctx: &ShareContext) -> Rational {
    &ctx.net / rational::int(ctx.len as i64)
}

pub(super) fn absolute_fair(eps: &AbsoluteFairEpsilon, ctx: &ShareContext) -> Result<Rational, SchemeError> {
    let eps = &eps.0;
    eps.ensure_covers(ctx.len)?;
    let mut weight = eps.get(ctx.rank).clone();
    for i in ctx.rank + 1..=ctx.len {
        weight -= eps.get(i) / rational::int(i as i64 - 1);
    }
    Ok(&ctx.net * weight)
}

/// Whole-round vector, accumulating the subtracted tail from the back.
pub(super) fn absolute_fair_round(
    eps: &AbsoluteFairEpsilon,
    len: usize,
    net: &Rational,
) -> Result<Vec<Rational>, SchemeError> {
    let eps = &eps.0;
    eps.ensure_covers(len)?;
    let mut out = vec![Rational::zero(); len];
    let mut tail = Rational::zero();
    for rank in (1..=len).rev() {
        out[rank - 1] = net * (eps.get(rank) - &tail);
        if rank > 1 {
            tail += eps.get(rank) / rational::int(rank as i64 - 1);
        }
    }
    Ok(out)
}

pub(super) fn relative_fair(eps: &EpsilonTable, ctx: &ShareContext) -> Result<Rational, SchemeError> {
    eps.ensure_covers(ctx.len)?;
    let mut weight = eps.get(ctx.rank).clone();
    for j in ctx.rank + 1..=ctx.len {
        weight *= Rational::one() - eps.get(j);
    }
    Ok(&ctx.net * weight)
}

pub(super) fn relative_fair_round(eps: &EpsilonTable, len: usize, net: &Rational) -> Result<Vec<Rational>, SchemeError> {
    eps.ensure_covers(len)?;
    let mut out = vec![Rational::zero(); len];
    let mut survive = Rational::one();
    for rank in (1..=len).rev() {
        out[rank - 1] = net * eps.get(rank) * &survive;
        survive *= Rational::one() - eps.get(rank);
    }
    Ok(out)
}

pub(super) fn k_pseudo(k: Option<usize>, delta: &Rational, ctx: &ShareContext) -> Result<Rational, SchemeError> {
    if delta.is_negative() || *delta > ctx.net {
        return Err(SchemeError::InvalidDelta {
            delta: delta.to_string(),
            net: ctx.net.to_string(),
        });
    }
    let Some(k) = k.filter(|&k| ctx.len >= k) else {
        return Ok(proportional(ctx));
    };
    Ok(match ctx.rank.cmp(&k) {
        std::cmp::Ordering::Less => (&ctx.net - delta) / rational::int(k as i64 - 1),
        std::cmp::Ordering::Equal => delta.clone(),
        std::cmp::Ordering::Greater => Rational::zero(),
    })
}
