//! Distinguished integral-valued polynomials and integrality of values `f(a)/d`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arith::{factor_integer, factorial, require_prime, FactorBudget};
use crate::closure::IvpGenerator;
use crate::element::AlgebraicElement;
use crate::error::{Error, Result};
use crate::fp::{factor_mod_p, monic_polys_of_degree, FpPoly};
use crate::index::{dedekind_divides_index, IndexReport};
use crate::poly::{rat, RatPoly};

/// Largest `p^n` for which [`psi_lcm_oracle`] enumerates polynomials.
pub const PSI_LCM_LIMIT: u64 = 81;
/// Largest `q = p^(f0!)` accepted by [`ef_bound_generator`].
pub const EF_Q_LIMIT: u64 = 729;
const PSI_DEGREE_LIMIT: u64 = 1 << 16;

/// `(X^(p^n) - X) ... (X^(p^2) - X)(X^p - X)`.
pub fn psi(p: u64, n: u32) -> Result<RatPoly> {
    require_prime(p)?;
    if n == 0 {
        return Err(Error::Domain("psi needs n >= 1".into()));
    }
    let mut degree = 0u64;
    let mut acc = RatPoly::one();
    let mut pk = 1u64;
    for _ in 0..n {
        pk = pk
            .checked_mul(p)
            .filter(|&d| degree + d <= PSI_DEGREE_LIMIT)
            .ok_or_else(|| Error::BudgetExceeded(format!("psi({p}, {n}) degree too large")))?;
        degree += pk;
        let term = &RatPoly::monomial(rat(1), pk as usize) - &RatPoly::x();
        acc = &acc * &term;
    }
    Ok(acc)
}

/// Brute-force least common multiple of every monic polynomial of degree
/// `1..=n` over F_p, compared with `psi(p, n) mod p`.
pub fn psi_lcm_oracle(p: u64, n: u32) -> Result<bool> {
    require_prime(p)?;
    let within = n >= 1 && p.checked_pow(n).is_some_and(|q| q <= PSI_LCM_LIMIT);
    if !within {
        return Err(Error::BudgetExceeded(format!(
            "lcm enumeration needs 1 <= p^n <= {PSI_LCM_LIMIT}, got p = {p}, n = {n}"
        )));
    }
    let mut lcm = FpPoly::one(p);
    for d in 1..=n as usize {
        for g in monic_polys_of_degree(p, d) {
            lcm = lcm.lcm(&g);
        }
    }
    let reduced = FpPoly::from_rat(&psi(p, n)?, p)?;
    Ok(reduced.monic() == lcm)
}

/// Whether `value / d` is an algebraic integer, decided by integrality of its
/// characteristic polynomial.
pub fn is_integral_value(e: &AlgebraicElement, d: u64) -> Result<bool> {
    if d == 0 {
        return Err(Error::Domain("denominator must be nonzero".into()));
    }
    let scaled = e.scaled(&BigRational::new(BigInt::one(), BigInt::from(d)));
    Ok(scaled.is_integral())
}

/// Whether `psi(p, n)(e) / p` is an algebraic integer.
pub fn psi_membership_check(p: u64, n: u32, e: &AlgebraicElement) -> Result<bool> {
    let g = psi(p, n)?;
    is_integral_value(&e.apply(&g), p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationPair {
    pub e: u32,
    pub f: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingReport {
    pub min_poly: RatPoly,
    pub prime: u64,
    /// `p` certified not to divide the index.
    pub index_ok: bool,
    pub pairs: Vec<RamificationPair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl SplittingReport {
    pub fn bounded_by(&self, e0: u32, f0: usize) -> bool {
        self.index_ok && self.pairs.iter().all(|r| r.e <= e0 && r.f <= f0)
    }
}

/// Ramification indices and residue degrees of `p` in `Q[X]/(f)`, read off
/// `f mod p`; only available when `p` does not divide the index.
pub fn kummer_splitting(f: &RatPoly, p: u64) -> Result<SplittingReport> {
    let dedekind = dedekind_divides_index(f, p)?;
    if dedekind.divides {
        return Ok(SplittingReport {
            min_poly: f.clone(),
            prime: p,
            index_ok: false,
            pairs: Vec::new(),
            reason: Some("index obstruction".into()),
        });
    }
    let pairs = factor_mod_p(f, p)?
        .into_iter()
        .map(|(g, e)| RamificationPair { e, f: g.deg() })
        .collect();
    Ok(SplittingReport { min_poly: f.clone(), prime: p, index_ok: true, pairs, reason: None })
}

/// `((X^q - X)^e0, p)` with `q = p^(f0!)`.
pub fn ef_bound_generator(p: u64, e0: u32, f0: u32) -> Result<IvpGenerator> {
    require_prime(p)?;
    if e0 == 0 || f0 == 0 {
        return Err(Error::Domain("e0 and f0 must be positive".into()));
    }
    let too_big = || Error::BudgetExceeded(format!("q = {p}^({f0}!) exceeds {EF_Q_LIMIT}"));
    if f0 > 4 {
        return Err(too_big());
    }
    let exp = factorial(f0 as u64).to_u32().expect("small factorial");
    let q = p.checked_pow(exp).filter(|&q| q <= EF_Q_LIMIT).ok_or_else(too_big)?;
    let base = &RatPoly::monomial(rat(1), q as usize) - &RatPoly::x();
    IvpGenerator::new(base.pow(e0 as u64), p)
}

/// Primes at which a low-degree `f` is forced to be integral by integrality of
/// `f(a)`: every prime not dividing the index of `a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForcedIntegrality {
    /// Forced at every prime except these (which divide the index).
    pub all_primes_except: Vec<u64>,
    /// Further primes that could not be ruled out: large untested primes and
    /// the unfactored part of the discriminant.
    pub unresolved: Vec<String>,
    /// Primes in the denominators of `f`.
    pub denominator_primes: Vec<u64>,
    /// Denominator primes at which `f` is forced to be integral: each one
    /// shows that `f(a)` is not an algebraic integer.
    pub violations: Vec<u64>,
}

/// If `deg f < deg a` and `f(a)` is integral then `f` is `q`-integral for every
/// prime `q` not dividing the index of `a`.
pub fn forced_integrality(f: &RatPoly, e: &AlgebraicElement, report: &IndexReport) -> Result<ForcedIntegrality> {
    if f.deg() >= e.degree() && !f.is_zero() {
        return Err(Error::Domain(format!(
            "need deg f < {} for the index constraint, got {}",
            e.degree(),
            f.deg()
        )));
    }
    if &report.min_poly != e.min_poly() {
        return Err(Error::Domain("index report is for a different minimal polynomial".into()));
    }
    let except: Vec<u64> = report.tested_primes.iter().filter(|t| t.divides).map(|t| t.prime).collect();
    let mut unresolved = report.untested_primes.clone();
    if !report.unfactored_part.is_one() {
        unresolved.push(report.unfactored_part.to_string());
    }
    let den = f.denominator_lcm();
    let fac = factor_integer(&den.magnitude().clone(), FactorBudget::default());
    let mut denominator_primes = BTreeSet::new();
    let mut violations = Vec::new();
    for q in fac.primes.keys() {
        let Some(q) = q.to_u64() else { continue };
        denominator_primes.insert(q);
        let excluded = match report.prime_excluded(q) {
            Some(x) => x,
            None => !dedekind_divides_index(e.min_poly(), q)?.divides,
        };
        if excluded {
            violations.push(q);
        }
    }
    if !fac.unfactored.is_one() {
        unresolved.push(format!("denominator cofactor {}", fac.unfactored));
    }
    Ok(ForcedIntegrality {
        all_primes_except: except,
        unresolved,
        denominator_primes: denominator_primes.into_iter().collect(),
        violations,
    })
}
