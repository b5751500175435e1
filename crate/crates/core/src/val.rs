//! Rank-one valuation values: exact rationals plus a point at infinity,
//! normalized so that `v_p(p) = 1`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Val {
    Finite(BigRational),
    Infinity,
}

impl Val {
    pub fn zero() -> Self {
        Val::Finite(BigRational::zero())
    }

    pub fn int(n: i64) -> Self {
        Val::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den` as a valuation; panics on `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Val::Finite(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Val::Infinity)
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Val::Finite(q) => q.is_positive(),
            Val::Infinity => true,
        }
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Val::Finite(q) => Some(q),
            Val::Infinity => None,
        }
    }
}

impl From<BigRational> for Val {
    fn from(q: BigRational) -> Self {
        Val::Finite(q)
    }
}

impl PartialOrd for Val {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Val {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Val::Infinity, Val::Infinity) => Ordering::Equal,
            (Val::Infinity, _) => Ordering::Greater,
            (_, Val::Infinity) => Ordering::Less,
            (Val::Finite(a), Val::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Infinity => write!(f, "inf"),
            Val::Finite(q) => write!(f, "{}", q),
        }
    }
}

impl FromStr for Val {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") || t == "∞" {
            return Ok(Val::Infinity);
        }
        parse_rational(t).map(Val::Finite)
    }
}

/// Parses `a` or `a/b` with optional sign into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = t.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

impl Serialize for Val {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Val {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Int(i64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Int(n) => Ok(Val::int(n)),
        }
    }
}

/// Serde helper writing a `BigRational` as an `a/b` string.
pub mod rational_string {
    use super::*;

    pub fn serialize<S: Serializer>(q: &BigRational, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde helper writing any `Display + FromStr` value (big integers,
/// polynomials) as a string.
pub mod display_string {
    use super::*;

    pub fn serialize<T: fmt::Display, S: Serializer>(v: &T, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, T, D>(deserializer: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: fmt::Display,
        D: Deserializer<'de>,
    {
        let s = String::deserialize(deserializer)?;
        s.trim().parse().map_err(serde::de::Error::custom)
    }
}

/// A multiset of valuations as `(value, multiplicity)` pairs, ascending by value.
pub type ValMultiset = Vec<(Val, usize)>;

/// Collapses a list of values into an ascending multiset.
pub fn to_multiset(mut values: Vec<Val>) -> ValMultiset {
    values.sort();
    let mut out: ValMultiset = Vec::new();
    for v in values {
        match out.last_mut() {
            Some((last, count)) if *last == v => *count += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

pub fn multiset_total(ms: &ValMultiset) -> usize {
    ms.iter().map(|(_, m)| m).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_dominates() {
        assert!(Val::Infinity > Val::int(1_000_000));
        assert!(Val::ratio(1, 2) < Val::ratio(2, 3));
        assert_eq!(Val::ratio(2, 4), Val::ratio(1, 2));
    }

    #[test]
    fn parse_and_print() {
        assert_eq!("inf".parse::<Val>().unwrap(), Val::Infinity);
        assert_eq!("-3/6".parse::<Val>().unwrap(), Val::ratio(-1, 2));
        assert_eq!(Val::ratio(3, 2).to_string(), "3/2");
        assert!("1/0".parse::<Val>().is_err());
        assert!("x".parse::<Val>().is_err());
    }

    #[test]
    fn json_forms() {
        let v: Val = serde_json::from_str("\"1/4\"").unwrap();
        assert_eq!(v, Val::ratio(1, 4));
        let w: Val = serde_json::from_str("2").unwrap();
        assert_eq!(w, Val::int(2));
        assert_eq!(serde_json::to_string(&Val::Infinity).unwrap(), "\"inf\"");
    }

    #[test]
    fn multiset_collapse() {
        let ms = to_multiset(vec![Val::Infinity, Val::ratio(1, 2), Val::ratio(1, 2)]);
        assert_eq!(ms, vec![(Val::ratio(1, 2), 2), (Val::Infinity, 1)]);
        assert_eq!(multiset_total(&ms), 3);
    }
}
