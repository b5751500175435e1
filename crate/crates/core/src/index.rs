//! Dedekind's index criterion and certificates that `Z[a]` is the maximal order.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{abs_biguint, factor_integer, require_prime, FactorBudget};
use crate::error::{Error, Result};
use crate::fp::{factor_mod_p_seeded, FpPoly};
use crate::poly::RatPoly;
use crate::resultant::discriminant;
use crate::val::display_string;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DedekindOutcome {
    /// Whether `p` divides the index `[O_K : Z[a]]`.
    pub divides: bool,
    /// A repeated factor of `f mod p` dividing `F mod p`, present iff `divides`.
    pub witness: Option<FpPoly>,
}

fn require_squarefree(f: &RatPoly) -> Result<()> {
    if f.gcd(&f.derivative()).deg() > 0 {
        return Err(Error::NotSquarefree(f.to_string()));
    }
    Ok(())
}

/// Dedekind's criterion with monic lifts whose coefficients lie in `[0, p)`.
pub fn dedekind_divides_index(f: &RatPoly, p: u64) -> Result<DedekindOutcome> {
    dedekind_divides_index_seeded(f, p, crate::arith::DEFAULT_SEED)
}

pub fn dedekind_divides_index_seeded(f: &RatPoly, p: u64, seed: u64) -> Result<DedekindOutcome> {
    f.require_monic_integer()?;
    require_prime(p)?;
    if f.deg() == 0 {
        return Err(Error::Domain("Dedekind's criterion needs degree >= 1".into()));
    }
    require_squarefree(f)?;
    let factors = factor_mod_p_seeded(f, p, seed)?;
    let lifted = factors
        .iter()
        .fold(RatPoly::one(), |acc, (g, e)| &acc * &g.lift().pow(*e as u64));
    let p_inv = BigRational::new(BigInt::one(), BigInt::from(p));
    let big_f = (f - &lifted).scale(&p_inv);
    let f_bar = FpPoly::from_rat(&big_f, p)?;
    let witness = factors
        .iter()
        .filter(|(_, e)| *e >= 2)
        .find(|(g, _)| g.divides(&f_bar))
        .map(|(g, _)| g.clone());
    Ok(DedekindOutcome { divides: witness.is_some(), witness })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriState {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeTest {
    pub prime: u64,
    pub divides: bool,
    pub witness: Option<FpPoly>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexReport {
    pub min_poly: RatPoly,
    #[serde(with = "display_string")]
    pub disc: BigInt,
    pub tested_primes: Vec<PrimeTest>,
    pub index_is_one: TriState,
    /// Product of discriminant cofactors that were not split (1 when fully factored).
    #[serde(with = "display_string")]
    pub unfactored_part: BigUint,
    /// Primes whose square divides the discriminant but are too large to test.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub untested_primes: Vec<String>,
}

impl IndexReport {
    /// Whether `p` was tested and found not to divide the index, or cannot
    /// divide it because `p^2` does not divide the discriminant.
    pub fn prime_excluded(&self, p: u64) -> Option<bool> {
        if let Some(t) = self.tested_primes.iter().find(|t| t.prime == p) {
            return Some(!t.divides);
        }
        let pb = BigInt::from(p);
        if !(&self.disc % (&pb * &pb)).is_zero() {
            return Some(true);
        }
        None
    }
}

pub fn index_one_certificate(f: &RatPoly) -> Result<IndexReport> {
    index_one_certificate_with(f, FactorBudget::default())
}

/// Tests every prime whose square divides `disc(f)`; degrades to `Unknown`
/// when the discriminant cannot be factored far enough to rule out a square.
pub fn index_one_certificate_with(f: &RatPoly, budget: FactorBudget) -> Result<IndexReport> {
    f.require_monic_integer()?;
    let disc_q = discriminant(f)?;
    if disc_q.is_zero() {
        return Err(Error::NotSquarefree(f.to_string()));
    }
    let disc = disc_q.to_integer();
    let fac = factor_integer(&abs_biguint(&disc), budget);
    let mut tested = Vec::new();
    let mut untested = Vec::new();
    for (q, &e) in &fac.primes {
        if e < 2 {
            continue;
        }
        match q.to_u64() {
            Some(q) => {
                let out = dedekind_divides_index_seeded(f, q, budget.seed)?;
                tested.push(PrimeTest { prime: q, divides: out.divides, witness: out.witness });
            }
            None => untested.push(q.to_string()),
        }
    }
    let rest_may_hide_square = !fac.unfactored.is_one() && !cofactor_is_squarefree(&fac.unfactored, budget);
    let index_is_one = if tested.iter().any(|t| t.divides) {
        TriState::No
    } else if rest_may_hide_square || !untested.is_empty() {
        TriState::Unknown
    } else {
        TriState::Yes
    };
    Ok(IndexReport {
        min_poly: f.clone(),
        disc,
        tested_primes: tested,
        index_is_one,
        unfactored_part: fac.unfactored,
        untested_primes: untested,
    })
}

/// After trial division to `B`, a cofactor below `B^3` has at most two prime
/// factors, so it is squarefree unless it is a perfect square.
fn cofactor_is_squarefree(m: &BigUint, budget: FactorBudget) -> bool {
    let b = BigUint::from(budget.trial_bound);
    let r = m.sqrt();
    m < &(&b * &b * &b) && &r * &r != *m
}
