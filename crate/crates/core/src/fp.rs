//! Dense polynomials over a prime field F_p and their factorization
//! (squarefree decomposition, distinct-degree, Cantor-Zassenhaus splitting).

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{pow_mod_u64, require_prime, DEFAULT_SEED};
use crate::error::{Error, Result};
use crate::poly::RatPoly;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod_u64(a, p - 2, p)
}

impl FpPoly {
    /// Reduces the coefficients mod `p`; `p` is assumed prime.
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % p).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    pub fn from_i64(p: u64, coeffs: &[i64]) -> Self {
        let pi = p as i128;
        Self::new(
            p,
            coeffs
                .iter()
                .map(|&c| (c as i128).rem_euclid(pi) as u64)
                .collect(),
        )
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    /// Reduction of a `p`-integral rational polynomial.
    pub fn from_rat(f: &RatPoly, p: u64) -> Result<Self> {
        require_prime(p)?;
        if !f.is_p_integral(p) {
            return Err(Error::NotPIntegral { p, poly: f.to_string() });
        }
        let pb = BigInt::from(p);
        let coeffs = f
            .coeffs()
            .iter()
            .map(|c| {
                let num = reduce(c.numer(), &pb);
                let den = reduce(c.denom(), &pb);
                mulm(num, inv(den, p), p)
            })
            .collect();
        Ok(Self::new(p, coeffs))
    }

    /// Lift with coefficients in `[0, p)`.
    pub fn lift(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let i = inv(self.lc(), self.p);
        self.scale(i)
    }

    pub fn scale(&self, c: u64) -> Self {
        Self::new(self.p, self.coeffs.iter().map(|&a| mulm(a, c, self.p)).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(
            self.p,
            (0..n)
                .map(|i| (self.c(i) + o.c(i)) % self.p)
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(
            self.p,
            (0..n)
                .map(|i| (self.c(i) + self.p - o.c(i)) % self.p)
                .collect(),
        )
    }

    fn c(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mulm(a, b, p)) % p;
            }
        }
        Self::new(p, out)
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.p);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        let dd = d.deg();
        if self.coeffs.len() < d.coeffs.len() {
            return (Self::zero(p), self.clone());
        }
        let il = inv(d.lc(), p);
        let mut r = self.coeffs.clone();
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = mulm(r[k + dd], il, p);
            if c == 0 {
                continue;
            }
            for (j, &dj) in d.coeffs.iter().enumerate() {
                r[k + j] = (r[k + j] + p - mulm(c, dj, p)) % p;
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(p, q), Self::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        self.mul(o).div_rem(&self.gcd(o)).0.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mulm(c, i as u64 % self.p, self.p))
                .collect(),
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mulm(acc, x, self.p) + c) % self.p)
    }

    /// `self^e mod m` for an arbitrary-size exponent.
    pub fn pow_mod(&self, e: &BigUint, m: &Self) -> Self {
        let mut acc = Self::one(self.p).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m);
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }

    /// Exhaustive irreducibility by trial division with every monic polynomial
    /// of degree at most half; only for tiny fields and degrees.
    pub fn is_irreducible_brute_force(&self) -> bool {
        let n = self.deg();
        if n == 0 {
            return false;
        }
        for d in 1..=n / 2 {
            for cand in monic_polys_of_degree(self.p, d) {
                if cand.divides(self) {
                    return false;
                }
            }
        }
        true
    }

    /// Rabin-style irreducibility via the distinct-degree factorization.
    pub fn is_irreducible(&self) -> bool {
        let n = self.deg();
        if n == 0 {
            return false;
        }
        if !self.gcd(&self.derivative()).is_one() {
            return false;
        }
        let ddf = distinct_degree(&self.monic());
        ddf.len() == 1 && ddf[0].1 == n
    }
}

fn reduce(n: &BigInt, p: &BigInt) -> u64 {
    let r = n % p;
    let r = if r < BigInt::zero() { r + p } else { r };
    r.to_u64().expect("residue fits u64")
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.lift(), self.p)
    }
}

/// All monic polynomials of exact degree `d` over F_p.
pub fn monic_polys_of_degree(p: u64, d: usize) -> impl Iterator<Item = FpPoly> {
    let total = (p as u128).pow(d as u32);
    (0..total).map(move |mut idx| {
        let mut coeffs = Vec::with_capacity(d + 1);
        for _ in 0..d {
            coeffs.push((idx % p as u128) as u64);
            idx /= p as u128;
        }
        coeffs.push(1);
        FpPoly::new(p, coeffs)
    })
}

/// Yun-style squarefree decomposition of a monic polynomial, adapted to
/// characteristic p: returns `(g_i, i)` with `f = prod g_i^i`, each `g_i`
/// squarefree.
fn squarefree(f: &FpPoly) -> Vec<(FpPoly, u32)> {
    let p = f.p;
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_rem(&c).0;
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_rem(&y).0;
        if !z.is_one() {
            out.push((z.monic(), i));
        }
        i += 1;
        w = y;
        c = c.div_rem(&w).0;
    }
    if !c.is_one() {
        // c is a p-th power: take the p-th root coefficientwise.
        let root = FpPoly::new(
            p,
            c.coeffs.iter().step_by(p as usize).copied().collect(),
        );
        for (g, j) in squarefree(&root.monic()) {
            out.push((g, j * p as u32));
        }
    }
    out
}

/// Splits a monic squarefree polynomial into `(product of all degree-d factors, d)`.
fn distinct_degree(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut g = f.clone();
    let x = FpPoly::x(p);
    let mut h = x.clone();
    let pb = BigUint::from(p);
    let mut d = 1;
    while g.deg() >= 2 * d {
        h = h.pow_mod(&pb, &g);
        let gd = g.gcd(&h.sub(&x));
        if !gd.is_one() {
            g = g.div_rem(&gd).0;
            h = h.rem(&g);
            out.push((gd, d));
        }
        d += 1;
    }
    if g.deg() > 0 {
        let dg = g.deg();
        out.push((g, dg));
    }
    out
}

fn random_poly(p: u64, below: usize, rng: &mut ChaCha8Rng) -> FpPoly {
    FpPoly::new(p, (0..below).map(|_| rng.gen_range(0..p)).collect())
}

/// Cantor-Zassenhaus equal-degree splitting of a monic squarefree product of
/// degree-`d` irreducibles.
fn equal_degree(f: &FpPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
    let p = f.p;
    let n = f.deg();
    if n == d {
        return vec![f.clone()];
    }
    loop {
        let a = random_poly(p, n, rng);
        if a.deg() == 0 {
            continue;
        }
        let b = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(md-1)) with md = d
            let mut t = a.rem(f);
            let mut acc = t.clone();
            for _ in 1..d {
                t = t.mul(&t).rem(f);
                acc = acc.add(&t);
            }
            acc
        } else {
            let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
            a.pow_mod(&e, f).sub(&FpPoly::one(p))
        };
        let g = f.gcd(&b);
        if g.deg() > 0 && g.deg() < n {
            let other = f.div_rem(&g).0.monic();
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&other, d, rng));
            return out;
        }
    }
}

/// Factors `f` over F_p into distinct monic irreducibles with exponents.
/// Output is sorted lexicographically by coefficient tuple (constant term
/// first), so it does not depend on the seed.
pub fn factor(f: &FpPoly, seed: u64) -> Vec<(FpPoly, u32)> {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut collected: Vec<(FpPoly, u32)> = Vec::new();
    for (g, mult) in squarefree(&f.monic()) {
        for (prod, d) in distinct_degree(&g) {
            for irr in equal_degree(&prod, d, &mut rng) {
                match collected.iter_mut().find(|(h, _)| *h == irr) {
                    Some((_, e)) => *e += mult,
                    None => collected.push((irr, mult)),
                }
            }
        }
    }
    collected.sort_by(|(a, _), (b, _)| a.coeffs.cmp(&b.coeffs));
    collected
}

/// Factorization of `f mod p` for a `p`-integral rational polynomial.
pub fn factor_mod_p(f: &RatPoly, p: u64) -> Result<Vec<(FpPoly, u32)>> {
    factor_mod_p_seeded(f, p, DEFAULT_SEED)
}

pub fn factor_mod_p_seeded(f: &RatPoly, p: u64, seed: u64) -> Result<Vec<(FpPoly, u32)>> {
    let fp = FpPoly::from_rat(f, p)?;
    if fp.is_zero() {
        return Err(Error::Domain(format!("{f} vanishes identically mod {p}")));
    }
    Ok(factor(&fp, seed))
}

/// Multiplies a factorization back together (monic).
pub fn expand_factorization(p: u64, factors: &[(FpPoly, u32)]) -> FpPoly {
    factors
        .iter()
        .fold(FpPoly::one(p), |acc, (g, e)| acc.mul(&g.pow(*e as u64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> RatPoly {
        s.parse().unwrap()
    }

    #[test]
    fn factor_examples() {
        let f = factor_mod_p(&p("x^3 + 8x^2 + 4"), 2).unwrap();
        assert_eq!(f, vec![(FpPoly::x(2), 3)]);

        let f = factor_mod_p(&p("x^2 - 1"), 2).unwrap();
        assert_eq!(f, vec![(FpPoly::new(2, vec![1, 1]), 2)]);

        let f = factor_mod_p(&p("x^6 + x^3 + 1"), 3).unwrap();
        assert_eq!(f, vec![(FpPoly::new(3, vec![2, 1]), 6)]);
    }

    #[test]
    fn factor_rejects_composite_modulus_and_p_denominators() {
        assert_eq!(factor_mod_p(&p("x^2 + 1"), 4), Err(Error::NotPrime(4)));
        assert!(matches!(factor_mod_p(&p("1/2x + 1"), 2), Err(Error::NotPIntegral { .. })));
        // 1/3 is a unit at 2
        let f = factor_mod_p(&p("1/3x + 1"), 2).unwrap();
        assert_eq!(f, vec![(FpPoly::new(2, vec![1, 1]), 1)]);
    }

    #[test]
    fn splits_distinct_factors_of_equal_degree() {
        // x^4 - 1 = (x-1)(x+1)(x-2)(x+2) mod 5
        let f = factor_mod_p(&p("x^4 - 1"), 5).unwrap();
        assert_eq!(f.len(), 4);
        assert!(f.iter().all(|(g, e)| g.deg() == 1 && *e == 1));
        // x^8 - x = x (x+1) (x^3+x+1)(x^3+x^2+1) mod 2
        let f = factor_mod_p(&p("x^8 - x"), 2).unwrap();
        let mut degs: Vec<usize> = f.iter().map(|(g, _)| g.deg()).collect();
        degs.sort();
        assert_eq!(degs, vec![1, 1, 3, 3]);
    }

    #[test]
    fn inseparable_powers() {
        // (x^2 + x + 1)^4 over F_2 has zero derivative at several stages.
        let base = FpPoly::new(2, vec![1, 1, 1]);
        let f = base.pow(4).mul(&FpPoly::x(2));
        assert_eq!(factor(&f, 7), vec![(FpPoly::x(2), 1), (base, 4)]);
        let g = FpPoly::new(3, vec![1, 0, 0, 1]); // x^3 + 1 = (x+1)^3 mod 3
        assert_eq!(factor(&g, 1), vec![(FpPoly::new(3, vec![1, 1]), 3)]);
    }

    #[test]
    fn output_is_seed_independent() {
        let f = FpPoly::from_i64(7, &[3, 1, 4, 1, 5, 9, 2, 6, 1]);
        assert_eq!(factor(&f, 1), factor(&f, 99));
    }

    #[test]
    fn irreducibility_tests_agree() {
        for d in 1..=4 {
            for f in monic_polys_of_degree(3, d) {
                assert_eq!(f.is_irreducible(), f.is_irreducible_brute_force(), "{f}");
            }
        }
    }

    proptest! {
        #[test]
        fn factorization_reassembles_and_factors_are_irreducible(
            prime in prop::sample::select(vec![2u64, 3, 5, 7]),
            coeffs in prop::collection::vec(0u64..7, 2..8),
        ) {
            let mut coeffs = coeffs;
            coeffs.push(1);
            let f = FpPoly::new(prime, coeffs);
            prop_assume!(f.deg() >= 1);
            let fac = factor(&f, DEFAULT_SEED);
            prop_assert_eq!(expand_factorization(prime, &fac), f.monic());
            for (i, (g, _)) in fac.iter().enumerate() {
                prop_assert!(g.lc() == 1);
                if g.deg() <= 3 {
                    prop_assert!(g.is_irreducible_brute_force(), "{}", g);
                }
                for (h, _) in &fac[i + 1..] {
                    prop_assert_ne!(g, h);
                }
            }
        }
    }
}
