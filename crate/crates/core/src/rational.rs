//! Exact rationals: parsing from the command line and `"p/q"` serialization.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"3"`, `"-7/2"`, `"3.5"`, or `"1e-3"`-free decimals exactly.
pub fn parse(text: &str) -> Result<Q> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::invalid("empty rational"));
    }
    let bad = || Error::invalid(format!("cannot parse rational '{t}'"));
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::invalid(format!("zero denominator in '{t}'")));
        }
        return Ok(Q::new(p, q));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit())
            || !whole_digits.chars().all(|c| c.is_ascii_digit())
            || (whole_digits.is_empty() && frac.is_empty())
        {
            return Err(bad());
        }
        let digits = format!("{whole_digits}{frac}");
        let num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let v = Q::new(num, den);
        return Ok(if negative { -v } else { v });
    }
    let p: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(p))
}

/// Comma separated list of rationals.
pub fn parse_list(text: &str) -> Result<Vec<Q>> {
    text.split(',').map(parse).collect()
}

pub fn format(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Sign as -1, 0, +1.
pub fn sign(q: &Q) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

pub fn serialize<S: Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format(q))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
    let s = String::deserialize(d)?;
    parse(&s).map_err(serde::de::Error::custom)
}

pub mod vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for q in v {
            seq.serialize_element(&format(q))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        let items = Vec::<String>::deserialize(d)?;
        items.iter().map(|s| parse(s).map_err(serde::de::Error::custom)).collect()
    }
}
