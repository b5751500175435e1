//! Dense univariate polynomials over Q with exact big-rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::val::parse_rational;

/// Ascending coefficients; the leading coefficient is nonzero unless the
/// polynomial is zero (empty coefficient list).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn x() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().cloned().map(BigRational::from_integer).collect())
    }

    /// `X - c`.
    pub fn linear_root(c: BigRational) -> Self {
        Self::new(vec![-c, BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn is_monic_integer(&self) -> bool {
        self.is_monic() && self.is_integral()
    }

    pub fn require_monic_integer(&self) -> Result<()> {
        if self.is_monic_integer() {
            Ok(())
        } else {
            Err(Error::NotMonicInteger(self.to_string()))
        }
    }

    /// Integer coefficients, if every coefficient is an integer.
    pub fn int_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let inv = self.lc().recip();
        self.scale(&inv)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// `self(g(X))`.
    pub fn compose(&self, g: &RatPoly) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(RatPoly::zero(), |acc, c| &(&acc * g) + &RatPoly::constant(c.clone()))
    }

    /// `self(X + c)`.
    pub fn shift(&self, c: &BigRational) -> Self {
        self.compose(&RatPoly::new(vec![c.clone(), BigRational::one()]))
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = RatPoly::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.deg();
        if self.coeffs.len() < d.coeffs.len() {
            return (RatPoly::zero(), self.clone());
        }
        let inv = d.lc().recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                if !dj.is_zero() {
                    rem[k + j] -= &c * dj;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (RatPoly::new(quot), RatPoly::new(rem))
    }

    pub fn rem(&self, d: &RatPoly) -> RatPoly {
        self.div_rem(d).1
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn exact_div(&self, d: &RatPoly) -> Option<RatPoly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &RatPoly) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `a * b mod m`.
    pub fn mul_mod(a: &RatPoly, b: &RatPoly, m: &RatPoly) -> RatPoly {
        (a * b).rem(m)
    }

    /// `self^k mod m`.
    pub fn pow_mod(&self, mut k: u64, m: &RatPoly) -> RatPoly {
        let mut base = self.rem(m);
        let mut acc = RatPoly::one().rem(m);
        while k > 0 {
            if k & 1 == 1 {
                acc = Self::mul_mod(&acc, &base, m);
            }
            k >>= 1;
            if k > 0 {
                base = Self::mul_mod(&base, &base, m);
            }
        }
        acc
    }

    /// `self(g) mod m`, evaluated by Horner's rule with reduction at every step.
    pub fn compose_mod(&self, g: &RatPoly, m: &RatPoly) -> RatPoly {
        let g = g.rem(m);
        self.coeffs.iter().rev().fold(RatPoly::zero(), |acc, c| {
            (&Self::mul_mod(&acc, &g, m) + &RatPoly::constant(c.clone())).rem(m)
        })
    }

    /// Every coefficient of `self` has nonnegative `p`-adic valuation.
    pub fn is_p_integral(&self, p: u64) -> bool {
        let p = BigInt::from(p);
        self.coeffs.iter().all(|c| !c.denom().is_multiple_of(&p))
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        RatPoly::new(out)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatPoly {
            type Output = RatPoly;
            fn $m(self, rhs: RatPoly) -> RatPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for RatPoly {
    /// Renders as `x^3 + 8*x^2 + 4`; the output parses back to the same polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            let var = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            if i == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{mag}*{var}")?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at position {} in {:?}", self.pos, self.src))
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn number(&mut self) -> Result<Option<BigRational>> {
        if self.peek() == Some('(') {
            self.pos += 1;
            let start = self.pos;
            while self.peek().is_some_and(|c| c != ')') {
                self.pos += 1;
            }
            if self.peek() != Some(')') {
                return Err(self.err("unclosed parenthesis"));
            }
            let inner: String = self.chars[start..self.pos].iter().collect();
            self.pos += 1;
            return parse_rational(&inner).map(Some);
        }
        let Some(num) = self.digits() else {
            return Ok(None);
        };
        if self.peek() == Some('/') {
            self.pos += 1;
            let den = self.digits().ok_or_else(|| self.err("expected denominator"))?;
            return parse_rational(&format!("{num}/{den}")).map(Some);
        }
        parse_rational(&num).map(Some)
    }

    fn term(&mut self) -> Result<RatPoly> {
        let coef = self.number()?;
        if coef.is_some() && self.peek() == Some('*') {
            self.pos += 1;
            if !matches!(self.peek(), Some('x' | 'X')) {
                return Err(self.err("expected variable after '*'"));
            }
        }
        let c = coef.clone().unwrap_or_else(BigRational::one);
        if matches!(self.peek(), Some('x' | 'X')) {
            self.pos += 1;
            let mut k = 1usize;
            if self.peek() == Some('^') {
                self.pos += 1;
                let d = self.digits().ok_or_else(|| self.err("expected exponent"))?;
                k = d.parse().map_err(|_| self.err("exponent too large"))?;
            }
            Ok(RatPoly::monomial(c, k))
        } else if coef.is_some() {
            Ok(RatPoly::constant(c))
        } else {
            Err(self.err("expected term"))
        }
    }
}

impl FromStr for RatPoly {
    type Err = Error;

    /// Accepts `x^3 + 8*x^2 + 4`, `x^3+8x^2+4`, `1/2*x - 3`, `(2/3)x`.
    fn from_str(s: &str) -> Result<Self> {
        let raw: Vec<char> = s.chars().collect();
        let mut last_token: Option<char> = None;
        let mut gap = false;
        for &c in &raw {
            if c.is_whitespace() {
                gap = true;
                continue;
            }
            if gap && c.is_ascii_digit() && last_token.is_some_and(|t| t.is_ascii_digit()) {
                return Err(Error::Parse(format!("digits separated by whitespace in {s:?}")));
            }
            gap = false;
            last_token = Some(c);
        }
        let chars: Vec<char> = raw.into_iter().filter(|c| !c.is_whitespace()).collect();
        let mut p = Parser { chars, pos: 0, src: s };
        if p.chars.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut acc = RatPoly::zero();
        let mut first = true;
        while p.pos < p.chars.len() {
            let sign = match p.peek() {
                Some('+') => {
                    p.pos += 1;
                    1
                }
                Some('-') => {
                    p.pos += 1;
                    -1
                }
                _ if first => 1,
                _ => return Err(p.err("expected '+' or '-'")),
            };
            first = false;
            let t = p.term()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
        }
        Ok(acc)
    }
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    coeffs: Vec<String>,
}

impl Serialize for RatPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RatPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(deserializer)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(RatPoly::new(coeffs))
    }
}

/// Parses either JSON `{"coeffs": [...]}` or the text grammar.
pub fn parse_poly_any(s: &str) -> Result<RatPoly> {
    let t = s.trim();
    if t.starts_with('{') {
        serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()))
    } else {
        t.parse()
    }
}
