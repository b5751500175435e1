//! Polynomial closure in the algebraic integers: membership in the sets
//! `S(f, d) = { a : f(a)/d integral }`, intersections over generator lists, and
//! binomial witnesses that an element lies outside the closure of Z.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::factorial;
use crate::element::AlgebraicElement;
use crate::error::{Error, Result};
use crate::ivp::is_integral_value;
use crate::poly::RatPoly;
use crate::val::display_string;

/// The polynomial `f/d` with `f` monic integer and nonconstant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGenerator")]
pub struct IvpGenerator {
    #[serde(with = "display_string")]
    f: RatPoly,
    d: u64,
}

#[derive(Deserialize)]
struct RawGenerator {
    #[serde(with = "display_string")]
    f: RatPoly,
    d: u64,
}

impl TryFrom<RawGenerator> for IvpGenerator {
    type Error = Error;

    fn try_from(raw: RawGenerator) -> Result<Self> {
        IvpGenerator::new(raw.f, raw.d)
    }
}

impl IvpGenerator {
    pub fn new(f: RatPoly, d: u64) -> Result<Self> {
        f.require_monic_integer()?;
        if f.deg() == 0 {
            return Err(Error::Domain("generator polynomial must be nonconstant".into()));
        }
        if d == 0 {
            return Err(Error::Domain("generator denominator must be >= 1".into()));
        }
        Ok(IvpGenerator { f, d })
    }

    pub fn f(&self) -> &RatPoly {
        &self.f
    }

    pub fn d(&self) -> u64 {
        self.d
    }
}

/// Whether `f(e)/d` is an algebraic integer.
pub fn in_sfd(e: &AlgebraicElement, gen: &IvpGenerator) -> Result<bool> {
    if gen.d == 1 {
        return Ok(e.is_integral());
    }
    is_integral_value(&e.apply(&gen.f), gen.d)
}

/// Membership in the intersection of `S(f, d)` over generators with `d >= 2`;
/// an empty effective list means the whole ring of algebraic integers.
pub fn closure_member(gens: &[IvpGenerator], e: &AlgebraicElement) -> Result<bool> {
    for g in gens.iter().filter(|g| g.d >= 2) {
        if !in_sfd(e, g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest `k_max * deg` accepted by [`z_closure_witness`].
pub const Z_WITNESS_BUDGET: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZWitness {
    /// `binomial(X, k)` is not integral at the element.
    pub k: u32,
    /// Characteristic polynomial of `binomial(e, k)`, with a non-integer coefficient.
    pub char_poly: RatPoly,
}

/// `X (X - 1) ... (X - k + 1) / k!`.
pub fn binomial_poly(k: u32) -> RatPoly {
    let falling = (0..k as i64).fold(RatPoly::one(), |acc, i| &acc * &RatPoly::from_ints(&[-i, 1]));
    falling.scale(&BigRational::new(BigInt::one(), factorial(k as u64)))
}

/// Smallest `k <= k_max` with `binomial(e, k)` non-integral. `None` means no
/// witness within the budget, which is inconclusive.
pub fn z_closure_witness(e: &AlgebraicElement, k_max: u32) -> Result<Option<ZWitness>> {
    if k_max == 0 || (k_max as usize).saturating_mul(e.degree()) > Z_WITNESS_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "k_max * degree must be in 1..={Z_WITNESS_BUDGET}, got {k_max} * {}",
            e.degree()
        )));
    }
    for k in 1..=k_max {
        let value = e.apply(&binomial_poly(k));
        let chi = value.char_poly();
        if !chi.is_integral() {
            return Ok(Some(ZWitness { k, char_poly: chi }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn p(s: &str) -> RatPoly {
        s.parse().unwrap()
    }

    fn gen(f: &str, d: u64) -> IvpGenerator {
        IvpGenerator::new(p(f), d).unwrap()
    }

    #[test]
    fn generator_validation_and_json() {
        assert!(IvpGenerator::new(p("2x"), 2).is_err());
        assert!(IvpGenerator::new(p("5"), 2).is_err());
        assert!(IvpGenerator::new(p("x"), 0).is_err());
        let gens: Vec<IvpGenerator> = serde_json::from_str(r#"[{"f":"x","d":2}]"#).unwrap();
        assert_eq!(gens, vec![gen("x", 2)]);
        assert_eq!(serde_json::to_string(&gens).unwrap(), r#"[{"f":"x","d":2}]"#);
        assert!(serde_json::from_str::<Vec<IvpGenerator>>(r#"[{"f":"x","d":0}]"#).is_err());
    }

    #[test]
    fn sfd_examples() {
        let a = AlgebraicElement::root(p("x^2 - 8")).unwrap();
        assert_eq!(in_sfd(&a, &gen("x", 2)), Ok(true));
        let b = AlgebraicElement::root(p("x^2 - 2")).unwrap();
        assert_eq!(in_sfd(&b, &gen("x", 2)), Ok(false));
        assert_eq!(in_sfd(&b, &gen("x^3 + x", 1)), Ok(true));
    }

    #[test]
    fn closure_examples() {
        let two_zeta3 = AlgebraicElement::root(p("x^2 + 2x + 4")).unwrap();
        assert_eq!(closure_member(&[gen("x", 2)], &two_zeta3), Ok(true));
        let sqrt2 = AlgebraicElement::root(p("x^2 - 2")).unwrap();
        assert_eq!(closure_member(&[gen("x", 2)], &sqrt2), Ok(false));
        assert_eq!(closure_member(&[], &sqrt2), Ok(true));
        assert_eq!(closure_member(&[gen("x", 1)], &sqrt2), Ok(true));
    }

    #[test]
    fn conjugate_presentations_agree() {
        // -sqrt(2) presented through the same minimal polynomial
        let a = AlgebraicElement::root(p("x^2 - 8")).unwrap();
        let neg = a.apply(&p("-x"));
        for g in [gen("x", 2), gen("x^2 + x", 4), gen("x", 4)] {
            assert_eq!(in_sfd(&a, &g), in_sfd(&neg, &g));
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial_poly(2), p("1/2x^2 - 1/2x"));
        for n in -6..=6 {
            for k in 0..6 {
                assert!(binomial_poly(k).eval(&rat(n)).is_integer());
            }
        }
    }

    #[test]
    fn witness_examples() {
        let sqrt2 = AlgebraicElement::root(p("x^2 - 2")).unwrap();
        let w = z_closure_witness(&sqrt2, 8).unwrap().unwrap();
        assert_eq!(w.k, 2);
        assert_eq!(w.char_poly, p("x^2 - 2x + 1/2"));
        let phi = AlgebraicElement::root(p("x^2 - x - 1")).unwrap();
        let w = z_closure_witness(&phi, 8).unwrap().unwrap();
        assert_eq!(w.k, 2);
        assert_eq!(w.char_poly, p("x^2 - x + 1/4"));
        assert_eq!(z_closure_witness(&AlgebraicElement::integer(7), 8), Ok(None));
        assert!(z_closure_witness(&sqrt2, 33).is_err());
    }
}
