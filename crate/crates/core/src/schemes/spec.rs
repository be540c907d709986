//! Text form of a scheme: `name` or `name:key=value,key=value`.
//!
//! ```text
//! proportional
//! absfair:eps=1|2/5|1/5      absfair:eps=@table.json
//! relfair:eps=1|1/2|1/4      relfair:eps=harmonic:16
//! kpseudo:k=3,delta=1/10     kpseudo:k=inf,delta=0
//! pps:c=1/3                  pps:d=3
//! pplns:n=3
//! geometric:r=2              cgeometric:r=3/2
//! ic:d=3
//! slush:lambda=1200
//! scheme1 .. scheme6         scheme2:lambda=1/2   scheme6:t=1/2
//! ```
//!
//! `Display` writes the canonical form, which parses back to the same scheme.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::{EpsilonTable, IndependenceScheme, PpsRate, Scheme, SchemeError};
use crate::rational::{self, Rational};

struct Params<'a> {
    scheme: &'a str,
    values: BTreeMap<&'a str, &'a str>,
}

impl<'a> Params<'a> {
    fn parse(scheme: &'a str, raw: &'a str) -> Result<Self, SchemeError> {
        let mut values = BTreeMap::new();
        for part in raw.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| SchemeError::InvalidParams(format!("{scheme}: expected key=value, got {part:?}")))?;
            if values.insert(key.trim(), value.trim()).is_some() {
                return Err(SchemeError::InvalidParams(format!("{scheme}: duplicate parameter {key}")));
            }
        }
        Ok(Params { scheme, values })
    }

    fn take(&mut self, key: &str) -> Option<&'a str> {
        self.values.remove(key)
    }

    fn required(&mut self, key: &str) -> Result<&'a str, SchemeError> {
        self.take(key)
            .ok_or_else(|| SchemeError::InvalidParams(format!("{}: missing parameter {key}", self.scheme)))
    }

    fn rational(&mut self, key: &str) -> Result<Option<Rational>, SchemeError> {
        self.take(key)
            .map(|v| rational::parse(v).map_err(|e| SchemeError::InvalidParams(format!("{}: {key}: {e}", self.scheme))))
            .transpose()
    }

    fn integer(&mut self, key: &str) -> Result<Option<usize>, SchemeError> {
        let scheme = self.scheme;
        self.take(key)
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|_| SchemeError::InvalidParams(format!("{scheme}: {key} must be a non-negative integer, got {v:?}")))
            })
            .transpose()
    }

    fn finish(self) -> Result<(), SchemeError> {
        match self.values.keys().next() {
            Some(key) => Err(SchemeError::InvalidParams(format!(
                "{}: unknown parameter {key}",
                self.scheme
            ))),
            None => Ok(()),
        }
    }
}

fn parse_epsilon(value: &str) -> Result<EpsilonTable, SchemeError> {
    if let Some(path) = value.strip_prefix('@') {
        let text = std::fs::read_to_string(path).map_err(|e| SchemeError::Io {
            path: path.to_string(),
            reason: e.to_string(),
        })?;
        return serde_json::from_str(&text).map_err(|e| SchemeError::InvalidEpsilon(format!("{path}: {e}")));
    }
    if let Some(len) = value.strip_prefix("harmonic:") {
        let len = len
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| SchemeError::InvalidEpsilon(format!("bad harmonic length {len:?}")))?;
        return Ok(EpsilonTable::harmonic(len));
    }
    let values = value
        .split('|')
        .map(|v| rational::parse(v).map_err(|e| SchemeError::InvalidEpsilon(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    EpsilonTable::new(values)
}

impl Scheme {
    /// Parses a scheme spec-string; see the module docs for the grammar.
    pub fn parse_spec(text: &str) -> Result<Scheme, SchemeError> {
        let text = text.trim();
        let (name, raw) = text.split_once(':').unwrap_or((text, ""));
        let mut p = Params::parse(name, raw)?;
        let scheme = match name {
            "proportional" => Scheme::Proportional,
            "absfair" => Scheme::absolute_fair(parse_epsilon(p.required("eps")?)?)?,
            "relfair" => Scheme::relative_fair(parse_epsilon(p.required("eps")?)?),
            "kpseudo" => {
                let k = match p.required("k")? {
                    "inf" | "infinity" => None,
                    v => Some(v.parse::<usize>().map_err(|_| {
                        SchemeError::InvalidParams(format!("kpseudo: k must be an integer or inf, got {v:?}"))
                    })?),
                };
                let delta = p.rational("delta")?.unwrap_or_default();
                Scheme::k_pseudo(k, delta)?
            }
            "pps" => {
                let rate = match (p.rational("c")?, p.integer("d")?) {
                    (Some(_), Some(_)) => {
                        return Err(SchemeError::InvalidParams("pps: give either c or d, not both".into()))
                    }
                    (Some(c), None) => PpsRate::Fixed(c),
                    (None, Some(d)) => PpsRate::PerDifficulty(d),
                    (None, None) => PpsRate::default(),
                };
                Scheme::pps(rate)?
            }
            "pplns" => Scheme::pplns(p.integer("n")?.unwrap_or(3))?,
            "geometric" => Scheme::geometric(p.rational("r")?.unwrap_or_else(|| rational::int(2)))?,
            "cgeometric" => Scheme::constrained_geometric(p.rational("r")?.unwrap_or_else(|| rational::int(2)))?,
            "ic" => Scheme::ic(p.integer("d")?.unwrap_or(3))?,
            "slush" => {
                let lambda = match p.take("lambda") {
                    Some(v) => v
                        .parse::<f64>()
                        .map_err(|_| SchemeError::InvalidParams(format!("slush: lambda must be a number, got {v:?}")))?,
                    None => super::SLUSH_DEFAULT_LAMBDA,
                };
                Scheme::slush(lambda)?
            }
            other => match other.strip_prefix("scheme").and_then(|id| id.parse::<u8>().ok()) {
                Some(id) => {
                    let lambda = p.rational("lambda")?;
                    let threshold = p.rational("t")?;
                    Scheme::Independence(IndependenceScheme::from_id(id, lambda, threshold)?)
                }
                None => return Err(SchemeError::UnknownScheme(other.to_string())),
            },
        };
        p.finish()?;
        Ok(scheme)
    }
}

impl FromStr for Scheme {
    type Err = SchemeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scheme::parse_spec(s)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::Proportional => write!(f, "proportional"),
            Scheme::AbsoluteFair(eps) => write!(f, "absfair:eps={}", eps.table().to_spec_list()),
            Scheme::RelativeFair(eps) => write!(f, "relfair:eps={}", eps.to_spec_list()),
            Scheme::KPseudoProportional { k, delta } => match k {
                Some(k) => write!(f, "kpseudo:k={k},delta={delta}"),
                None => write!(f, "kpseudo:k=inf,delta={delta}"),
            },
            Scheme::Pps(PpsRate::Fixed(c)) => write!(f, "pps:c={c}"),
            Scheme::Pps(PpsRate::PerDifficulty(d)) => write!(f, "pps:d={d}"),
            Scheme::Pplns { n } => write!(f, "pplns:n={n}"),
            Scheme::Geometric { r } => write!(f, "geometric:r={r}"),
            Scheme::ConstrainedGeometric { r } => write!(f, "cgeometric:r={r}"),
            Scheme::Ic { d } => write!(f, "ic:d={d}"),
            Scheme::Slush { lambda } => write!(f, "slush:lambda={lambda}"),
            Scheme::Independence(s) => match s {
                IndependenceScheme::FirstShareBonus { lambda } => write!(f, "scheme2:lambda={lambda}"),
                IndependenceScheme::GapSwitch { threshold } => write!(f, "scheme6:t={threshold}"),
                other => write!(f, "scheme{}", other.id()),
            },
        }
    }
}
