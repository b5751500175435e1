//! Algebraic elements `h(a)` for `a` a root of a monic integer polynomial, with
//! irreducibility certificates for that polynomial.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{abs_biguint, factor_integer, primes_below, FactorBudget};
use crate::error::{Error, Result};
use crate::fp::FpPoly;
use crate::newton::newton_polygon;
use crate::poly::RatPoly;
use crate::resultant::char_poly_mod;

/// How irreducibility of a minimal polynomial over Q was established.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Irreducibility {
    Linear,
    /// Degree 2 or 3 without a rational root.
    NoRationalRoot,
    Perron,
    Eisenstein { prime: u64 },
    /// The Newton polygon at `prime` is one edge whose slope has denominator
    /// equal to the degree, so every root generates a totally ramified
    /// extension of full degree.
    SingleSlope { prime: u64 },
    IrreducibleModP { prime: u64 },
    /// Degree 4, no rational root and no factorization into integer quadratics.
    NoQuadraticFactor,
    Cyclotomic { order: u64 },
    Unchecked,
}

impl Irreducibility {
    pub fn is_certified(&self) -> bool {
        !matches!(self, Irreducibility::Unchecked)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraicElement {
    min_poly: RatPoly,
    expr: RatPoly,
    certificate: Irreducibility,
}

const MOD_P_SEARCH_BOUND: u64 = 100;

fn int_coeffs(f: &RatPoly) -> Vec<BigInt> {
    f.int_coeffs().expect("integer polynomial")
}

/// `true` when `|a_{n-1}| > 1 + |a_{n-2}| + ... + |a_0|`. A `false` answer is
/// inconclusive.
pub fn perron_irreducible(f: &RatPoly) -> Result<bool> {
    if !f.is_monic_integer() {
        return Err(Error::Domain(format!("Perron's criterion needs a monic integer polynomial, got {f}")));
    }
    let n = f.deg();
    if n < 2 {
        return Err(Error::Domain("Perron's criterion needs degree >= 2".into()));
    }
    let a = int_coeffs(f);
    if a[0].is_zero() {
        return Err(Error::Domain("Perron's criterion needs f(0) != 0".into()));
    }
    let rest: BigInt = a[..n - 1].iter().map(|c| c.abs()).sum();
    Ok(a[n - 1].abs() > rest + 1)
}

/// A prime `p` at which the monic integer `f` is Eisenstein, if any.
pub fn eisenstein_prime(f: &RatPoly) -> Option<u64> {
    let a = int_coeffs(f);
    let n = a.len() - 1;
    if n < 1 || a[0].is_zero() {
        return None;
    }
    let g = a[..n].iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_one() {
        return None;
    }
    let budget = FactorBudget { rho_iterations: 1 << 12, ..FactorBudget::default() };
    let fac = factor_integer(&abs_biguint(&g), budget);
    fac.primes.keys().find_map(|p| {
        let pi = BigInt::from(p.clone());
        let p2 = &pi * &pi;
        if (&a[0] % &p2).is_zero() {
            None
        } else {
            p.to_u64()
        }
    })
}

/// A prime at which the Newton polygon of `f` is a single edge with slope
/// `a/n` in lowest terms, `n = deg f`.
pub fn single_slope_prime(f: &RatPoly) -> Option<u64> {
    let n = f.deg();
    let a0 = f.coeff(0).to_integer();
    if n < 2 || a0.is_zero() {
        return None;
    }
    let budget = FactorBudget { rho_iterations: 1 << 12, ..FactorBudget::default() };
    let fac = factor_integer(&abs_biguint(&a0), budget);
    fac.primes.keys().filter_map(|p| p.to_u64()).find(|&p| {
        newton_polygon(f, p).is_ok_and(|np| {
            np.segments.len() == 1 && np.segments[0].slope.denom() == &BigInt::from(n)
        })
    })
}

/// Smallest prime below a fixed bound modulo which `f` stays irreducible.
pub fn irreducible_mod_some_prime(f: &RatPoly) -> Option<u64> {
    primes_below(MOD_P_SEARCH_BOUND)
        .into_iter()
        .find(|&p| FpPoly::from_rat(f, p).is_ok_and(|g| g.is_irreducible()))
}

/// Signed divisors of a nonzero integer, if it factors within budget.
fn signed_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let fac = factor_integer(&abs_biguint(n), FactorBudget::default());
    if !fac.is_complete() {
        return None;
    }
    let mut divs = vec![BigUint::one()];
    for (p, &e) in &fac.primes {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = d.clone();
            for _ in 0..=e {
                next.push(pk.clone());
                pk *= p;
            }
        }
        divs = next;
    }
    let mut out = Vec::with_capacity(2 * divs.len());
    for d in divs {
        let d = BigInt::from(d);
        out.push(-d.clone());
        out.push(d);
    }
    Some(out)
}

fn eval_int(a: &[BigInt], x: &BigInt) -> BigInt {
    a.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// An integer root of the monic integer `f` (the only possible rational roots).
/// `Err(())` when the constant term could not be factored.
#[allow(clippy::result_unit_err)]
pub fn integer_root(f: &RatPoly) -> std::result::Result<Option<BigInt>, ()> {
    let a = int_coeffs(f);
    if a[0].is_zero() {
        return Ok(Some(BigInt::zero()));
    }
    let divs = signed_divisors(&a[0]).ok_or(())?;
    Ok(divs.into_iter().find(|d| eval_int(&a, d).is_zero()))
}

/// A factorization of a monic integer quartic into two monic integer
/// quadratics, as `(c0, c1, d0, d1)` with `(X^2 + c1 X + c0)(X^2 + d1 X + d0)`.
#[allow(clippy::result_unit_err)]
pub fn quadratic_factor(f: &RatPoly) -> std::result::Result<Option<[BigInt; 4]>, ()> {
    let a = int_coeffs(f);
    assert_eq!(a.len(), 5, "quartic expected");
    if a[0].is_zero() {
        return Ok(Some([BigInt::zero(), BigInt::zero(), a[2].clone(), a[3].clone()]));
    }
    for c in signed_divisors(&a[0]).ok_or(())? {
        let cp = &a[0] / &c;
        // b^2 - a3 b + (a2 - c - c') = 0
        let k = &a[2] - &c - &cp;
        let disc = &a[3] * &a[3] - BigInt::from(4) * &k;
        if disc.is_negative() {
            continue;
        }
        let s = disc.sqrt();
        if &s * &s != disc {
            continue;
        }
        for root in [&a[3] + &s, &a[3] - &s] {
            if root.is_odd() {
                continue;
            }
            let b = root / 2;
            let bp = &a[3] - &b;
            if &b * &cp + &bp * &c == a[1] {
                return Ok(Some([c.clone(), b, cp.clone(), bp]));
            }
        }
    }
    Ok(None)
}

/// Tries Perron, Eisenstein, irreducibility modulo a small prime, and the
/// exhaustive low-degree tests, in that order. Reducible input is an error
/// whenever a factor is found.
pub fn certify_irreducible(f: &RatPoly) -> Result<Irreducibility> {
    f.require_monic_integer()?;
    let n = match f.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::Domain("minimal polynomial must have degree >= 1".into())),
    };
    if n == 1 {
        return Ok(Irreducibility::Linear);
    }
    let reducible = |why: String| Err(Error::Reducible(format!("{f}: {why}")));
    if f.coeff(0).is_zero() {
        return reducible("divisible by x".into());
    }
    if perron_irreducible(f)? {
        return Ok(Irreducibility::Perron);
    }
    if let Some(prime) = eisenstein_prime(f) {
        return Ok(Irreducibility::Eisenstein { prime });
    }
    if let Some(prime) = single_slope_prime(f) {
        return Ok(Irreducibility::SingleSlope { prime });
    }
    if n <= 4 {
        match integer_root(f) {
            Ok(Some(r)) => return reducible(format!("root {r}")),
            Ok(None) if n <= 3 => return Ok(Irreducibility::NoRationalRoot),
            Ok(None) => match quadratic_factor(f) {
                Ok(Some([c0, c1, d0, d1])) => {
                    let q1 = RatPoly::from_bigints(&[c0, c1, BigInt::one()]);
                    let q2 = RatPoly::from_bigints(&[d0, d1, BigInt::one()]);
                    return reducible(format!("({q1}) * ({q2})"));
                }
                Ok(None) => return Ok(Irreducibility::NoQuadraticFactor),
                Err(()) => {}
            },
            Err(()) => {}
        }
    }
    if let Some(prime) = irreducible_mod_some_prime(f) {
        return Ok(Irreducibility::IrreducibleModP { prime });
    }
    Ok(Irreducibility::Unchecked)
}

impl AlgebraicElement {
    /// `expr(a)` for a root `a` of `min_poly`; irreducibility is certified here
    /// and reducible input is rejected.
    pub fn new(min_poly: RatPoly, expr: RatPoly) -> Result<Self> {
        let certificate = certify_irreducible(&min_poly)?;
        Ok(Self::assemble(min_poly, expr, certificate))
    }

    /// Trusts a caller-supplied certificate.
    pub fn with_certificate(min_poly: RatPoly, expr: RatPoly, certificate: Irreducibility) -> Result<Self> {
        min_poly.require_monic_integer()?;
        if min_poly.deg() == 0 {
            return Err(Error::Domain("minimal polynomial must have degree >= 1".into()));
        }
        Ok(Self::assemble(min_poly, expr, certificate))
    }

    pub fn unchecked(min_poly: RatPoly, expr: RatPoly) -> Result<Self> {
        Self::with_certificate(min_poly, expr, Irreducibility::Unchecked)
    }

    fn assemble(min_poly: RatPoly, expr: RatPoly, certificate: Irreducibility) -> Self {
        let expr = if expr.deg() >= min_poly.deg() { expr.rem(&min_poly) } else { expr };
        AlgebraicElement { min_poly, expr, certificate }
    }

    /// A root of `min_poly` itself.
    pub fn root(min_poly: RatPoly) -> Result<Self> {
        Self::new(min_poly, RatPoly::x())
    }

    pub fn integer(m: i64) -> Self {
        Self::assemble(
            RatPoly::from_ints(&[-m, 1]),
            RatPoly::x(),
            Irreducibility::Linear,
        )
    }

    pub fn min_poly(&self) -> &RatPoly {
        &self.min_poly
    }

    pub fn expr(&self) -> &RatPoly {
        &self.expr
    }

    pub fn certificate(&self) -> &Irreducibility {
        &self.certificate
    }

    pub fn degree(&self) -> usize {
        self.min_poly.deg()
    }

    /// The element `g(self)`, reduced modulo the minimal polynomial.
    pub fn apply(&self, g: &RatPoly) -> Self {
        AlgebraicElement {
            min_poly: self.min_poly.clone(),
            expr: g.compose_mod(&self.expr, &self.min_poly),
            certificate: self.certificate.clone(),
        }
    }

    pub fn scaled(&self, c: &BigRational) -> Self {
        AlgebraicElement {
            min_poly: self.min_poly.clone(),
            expr: self.expr.scale(c),
            certificate: self.certificate.clone(),
        }
    }

    /// Monic polynomial whose roots are the values over all conjugates.
    pub fn char_poly(&self) -> RatPoly {
        char_poly_mod(&self.expr, &self.min_poly).expect("minimal polynomial validated at construction")
    }

    /// Whether the value is an algebraic integer.
    pub fn is_integral(&self) -> bool {
        self.char_poly().is_integral()
    }
}

impl fmt::Display for AlgebraicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at a root of {}", self.expr, self.min_poly)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn p(s: &str) -> RatPoly {
        s.parse().unwrap()
    }

    #[test]
    fn perron_examples() {
        assert_eq!(perron_irreducible(&p("x^3 + 8x^2 + 4")), Ok(true));
        assert_eq!(perron_irreducible(&p("x^2 + x + 1")), Ok(false));
        assert_eq!(perron_irreducible(&p("x^5 + 100x^4 + 3")), Ok(true));
        assert!(matches!(perron_irreducible(&p("2x^2 + 1")), Err(Error::Domain(_))));
        assert!(perron_irreducible(&p("x^2 + 5x")).is_err());
        assert!(perron_irreducible(&p("x + 5")).is_err());
    }

    #[test]
    fn certificates() {
        use Irreducibility::*;
        assert_eq!(certify_irreducible(&p("x - 3")), Ok(Linear));
        assert_eq!(certify_irreducible(&p("x^2 - 2")), Ok(Eisenstein { prime: 2 }));
        assert_eq!(certify_irreducible(&p("x^2 + 1")), Ok(NoRationalRoot));
        assert_eq!(certify_irreducible(&p("x^4 + 1")), Ok(NoQuadraticFactor));
        assert_eq!(certify_irreducible(&p("x^3 + 8x^2 + 4")), Ok(Perron));
        assert_eq!(certify_irreducible(&p("x^5 - x - 1")), Ok(IrreducibleModP { prime: 3 }));
        assert_eq!(certify_irreducible(&p("x^4 - 8")), Ok(SingleSlope { prime: 2 }));
        assert_eq!(certify_irreducible(&p("x^9 - 3125")), Ok(SingleSlope { prime: 5 }));
    }

    #[test]
    fn reducible_inputs_are_rejected() {
        for s in ["x^2 - 1", "x^3 - 8", "x^4 + 4", "x^4 - 5x^2 + 6", "x^2 + 3x"] {
            assert!(matches!(certify_irreducible(&p(s)), Err(Error::Reducible(_))), "{s}");
        }
        // x^4 + 4 = (x^2 + 2x + 2)(x^2 - 2x + 2)
        let fac = quadratic_factor(&p("x^4 + 4")).unwrap().unwrap();
        let q1 = RatPoly::from_bigints(&[fac[0].clone(), fac[1].clone(), BigInt::one()]);
        let q2 = RatPoly::from_bigints(&[fac[2].clone(), fac[3].clone(), BigInt::one()]);
        assert_eq!(&q1 * &q2, p("x^4 + 4"));
    }

    #[test]
    fn quartic_search_matches_mod_p_evidence() {
        // x^4 - 10x^2 + 1 is reducible mod every prime yet irreducible over Q.
        assert_eq!(irreducible_mod_some_prime(&p("x^4 - 10x^2 + 1")), None);
        assert_eq!(certify_irreducible(&p("x^4 - 10x^2 + 1")), Ok(Irreducibility::NoQuadraticFactor));
    }

    #[test]
    fn char_polys() {
        let e = AlgebraicElement::root(p("x^2 - 2")).unwrap();
        assert_eq!(e.char_poly(), p("x^2 - 2"));
        let e = AlgebraicElement::new(p("x^2 - 8"), p("1/2x")).unwrap();
        assert_eq!(e.char_poly(), p("x^2 - 2"));
        let e = AlgebraicElement::new(p("x^4 - 8"), p("1/2x^2")).unwrap();
        assert_eq!(e.char_poly(), p("x^4 - 4x^2 + 4"));
        assert!(e.is_integral());
        assert!(!AlgebraicElement::root(p("x^2 - 2")).unwrap().scaled(&BigRational::new(1.into(), 2.into())).is_integral());
    }

    #[test]
    fn apply_reduces_modulo_min_poly() {
        let e = AlgebraicElement::root(p("x^2 - 2")).unwrap();
        let sq = e.apply(&p("x^2"));
        assert_eq!(sq.expr(), &p("2"));
        assert_eq!(sq.char_poly(), p("x^2 - 4x + 4"));
        assert_eq!(AlgebraicElement::integer(7).char_poly(), p("x - 7"));
        assert_eq!(AlgebraicElement::integer(7).scaled(&rat(2)).char_poly(), p("x - 14"));
    }

    #[test]
    fn rejects_bad_min_polys() {
        assert!(AlgebraicElement::root(p("2x^2 - 1")).is_err());
        assert!(AlgebraicElement::root(p("x^2 - 1/2")).is_err());
        assert!(AlgebraicElement::root(p("3")).is_err());
    }
}
