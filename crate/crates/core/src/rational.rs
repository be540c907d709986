//! Exact rational numbers and their `"num/den"` text form.
//!
//! Every award, reward and time signature outside of Slush is a
//! [`Rational`]. The interchange format never uses decimals: a value is
//! written as `"num/den"` (reduced, denominator positive) and read back from
//! either that form or a bare integer string.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed rational {input:?}: {reason}")]
pub struct ParseRationalError {
    pub input: String,
    pub reason: &'static str,
}

/// Parses `"7"`, `"-3/4"` or `" 10 / 6 "` into a reduced rational.
pub fn parse(input: &str) -> Result<Rational, ParseRationalError> {
    let err = |reason| ParseRationalError {
        input: input.to_string(),
        reason,
    };
    let (num, den) = match input.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (input.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err("numerator is not an integer"))?;
    let den: BigInt = den.parse().map_err(|_| err("denominator is not an integer"))?;
    if den.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Always `num/den`, including `1/1`.
pub fn to_fraction_string(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// `value^exp` for a non-negative exponent.
pub fn pow(value: &Rational, exp: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= value;
    }
    acc
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        // Only reachable for magnitudes beyond f64 range.
        if value.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Renders with 12 significant digits, for human-readable reports only.
pub struct Decimal<'a>(pub &'a Rational);

impl fmt::Display for Decimal<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_significant(to_f64(self.0), 12))
    }
}

pub fn format_significant(value: f64, digits: usize) -> String {
    if value == 0.0 || !value.is_finite() {
        return format!("{value}");
    }
    let magnitude = value.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    let text = format!("{value:.decimals$}");
    if text.contains('.') {
        text.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        text
    }
}

pub mod serde_fraction {
    //! `#[serde(with = "...")]` adapter writing rationals as `"num/den"`.
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&to_fraction_string(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(de)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integer_and_fraction_forms() {
        assert_eq!(parse("7").unwrap(), int(7));
        assert_eq!(parse("10/6").unwrap(), ratio(5, 3));
        assert_eq!(parse(" -3 / 4 ").unwrap(), ratio(-3, 4));
        assert_eq!(parse("2/-4").unwrap(), ratio(-1, 2));
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse("1/0").is_err());
        assert!(parse("0.5").is_err());
        assert!(parse("").is_err());
        assert!(parse("a/b").is_err());
    }

    #[test]
    fn fraction_string_is_reduced_and_explicit() {
        assert_eq!(to_fraction_string(&ratio(4, 2)), "2/1");
        assert_eq!(to_fraction_string(&ratio(3, -9)), "-1/3");
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(Decimal(&ratio(1, 3)).to_string(), "0.333333333333");
        assert_eq!(Decimal(&int(26)).to_string(), "26");
        assert_eq!(format_significant(1234.5, 12), "1234.5");
    }

    #[test]
    fn pow_matches_repeated_product() {
        assert_eq!(pow(&ratio(3, 2), 3), ratio(27, 8));
        assert_eq!(pow(&int(5), 0), int(1));
    }
}
