//! Exact rational arithmetic helpers.
//!
//! Every probability, margin, radius, length, and ratio in this crate is a
//! [`Rational`]; no floating point is used anywhere in the computation paths.
//! Rationals cross serialization boundaries as decimal-free strings ("2/3",
//! "-5", "10"), with integer-valued numbers also accepted as bare JSON
//! integers on input.

use num::bigint::{BigInt, Sign};
use num::{BigRational, One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serializer};

/// Exact rational number used throughout the crate.
pub type Rational = BigRational;

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational `num/den`. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses "p/q", "p", or "-p" (whitespace-trimmed).
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty rational literal".to_string());
    }
    t.parse::<Rational>()
        .map_err(|e| format!("invalid rational {t:?}: {e}"))
}

/// Canonical string form: "p/q" in lowest terms, or just "p" when q == 1.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Decimal rendering at up to `places` fractional digits, round half away
/// from zero. Exact renderings come back as-is ("0.5"); inexact ones carry a
/// leading `~` so approximations are never mistaken for exact output.
pub fn decimal_string(r: &Rational, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let scaled = r.numer() * &scale;
    let (q, rem) = num::Integer::div_rem(&scaled, r.denom());
    let exact = rem.is_zero();
    // round half away from zero on the remainder
    let q = if (rem.magnitude() * 2u32) >= *r.denom().magnitude() {
        match scaled.sign() {
            Sign::Minus => q - 1,
            _ => q + 1,
        }
    } else {
        q
    };
    let neg = q.sign() == Sign::Minus;
    let mag = q.magnitude().to_string();
    let digits = if mag.len() <= places as usize {
        format!("{}{}", "0".repeat(places as usize + 1 - mag.len()), mag)
    } else {
        mag
    };
    let split = digits.len() - places as usize;
    let (int_part, frac_part) = digits.split_at(split);
    let frac_part = frac_part.trim_end_matches('0');
    let body = if frac_part.is_empty() {
        int_part.to_string()
    } else {
        format!("{int_part}.{frac_part}")
    };
    let signed = if neg { format!("-{body}") } else { body };
    if exact {
        signed
    } else {
        format!("~{signed}")
    }
}

/// Serde adapter: rational as a decimal-free string ("2/3").
pub mod rational_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rational, D::Error> {
        let repr = RationalRepr::deserialize(de)?;
        repr.into_rational().map_err(D::Error::custom)
    }
}

/// Serde adapter: optional rational as a string, omitted when `None`.
pub mod rational_string_opt {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, ser: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => ser.serialize_some(&format_rational(r)),
            None => ser.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Option<Rational>, D::Error> {
        let repr: Option<RationalRepr> = Option::deserialize(de)?;
        repr.map(|r| r.into_rational().map_err(D::Error::custom))
            .transpose()
    }
}

/// Serde adapter for value lists: integers stay bare JSON numbers, anything
/// else becomes a "p/q" string. Input accepts both forms freely.
pub mod rational_values {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(values: &[Rational], ser: S) -> Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(values.len()))?;
        for v in values {
            if v.denom().is_one() {
                if let Some(n) = v.numer().to_i64() {
                    seq.serialize_element(&n)?;
                    continue;
                }
            }
            seq.serialize_element(&format_rational(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Rational>, D::Error> {
        let reprs: Vec<RationalRepr> = Vec::deserialize(de)?;
        reprs
            .into_iter()
            .map(|r| r.into_rational().map_err(D::Error::custom))
            .collect()
    }
}

/// Wire form of a rational: bare integer or "p/q" string.
#[derive(Deserialize)]
#[serde(untagged)]
enum RationalRepr {
    Int(i64),
    Str(String),
}

impl RationalRepr {
    fn into_rational(self) -> Result<Rational, String> {
        match self {
            RationalRepr::Int(n) => Ok(rat_int(n)),
            RationalRepr::Str(s) => parse_rational(&s),
        }
    }
}

/// Absolute value of the difference, used for duel margins.
pub fn abs_diff(a: &Rational, b: &Rational) -> Rational {
    (a - b).abs()
}
