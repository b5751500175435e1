//! Integer arithmetic: primality, p-adic valuations of rationals, and
//! budgeted factorization (trial division followed by Pollard-Brent rho).

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Default seed for every randomized routine in the crate.
pub const DEFAULT_SEED: u64 = 0x1f0_5eed;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &SMALL {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn require_prime(p: u64) -> Result<()> {
    if is_prime_u64(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Exponent of `p` in a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> u64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

/// `v_p` of a nonzero rational.
pub fn rat_valuation(q: &BigRational, p: u64) -> i64 {
    int_valuation(q.numer(), p) as i64 - int_valuation(q.denom(), p) as i64
}

/// Primes below one million, computed once.
pub fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_below(1_000_000))
}

pub fn primes_below(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    if n < 3 {
        return Vec::new();
    }
    let mut sieve = vec![true; n];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i < n {
        if sieve[i] {
            let mut j = i * i;
            while j < n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i as u64))
        .collect()
}

/// The first `k` primes.
pub fn first_primes(k: usize) -> Vec<u64> {
    small_primes().iter().copied().take(k).collect()
}

pub fn euler_totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn jacobi(a: &BigInt, n: &BigInt) -> i32 {
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut result = 1;
    let two = BigInt::from(2);
    while !a.is_zero() {
        while a.is_even() {
            a /= &two;
            let r = (&n % 8u32).to_u32().unwrap();
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32) == BigInt::from(3) && (&n % 4u32) == BigInt::from(3) {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

fn strong_probable_prime_base2(n: &BigUint) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = BigUint::from(2u32).modpow(&d, n);
    if x == one || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

fn strong_lucas_probable_prime(n: &BigUint) -> bool {
    let n_int = BigInt::from(n.clone());
    // Selfridge method A: first D in 5, -7, 9, -11, ... with (D/n) = -1.
    let mut d = BigInt::from(5);
    loop {
        match jacobi(&d, &n_int) {
            -1 => break,
            0 => {
                if d.abs() != n_int {
                    return false;
                }
            }
            _ => {}
        }
        d = if d.is_positive() { -(d + 2i32) } else { -(d - 2i32) };
    }
    let p = BigInt::one();
    let q = (BigInt::one() - &d) / 4i32;
    let m = &n_int + 1i32;
    let s = m.trailing_zeros().unwrap_or(0);
    let k = &m >> s;

    let half = |x: BigInt| -> BigInt {
        let x = if x.is_odd() { x + &n_int } else { x };
        (x / 2i32).mod_floor(&n_int)
    };

    let mut u = BigInt::one();
    let mut v = p.clone();
    let mut qk = q.mod_floor(&n_int);
    let bits = k.bits();
    for i in (0..bits - 1).rev() {
        u = (&u * &v).mod_floor(&n_int);
        v = (&v * &v - &qk * 2i32).mod_floor(&n_int);
        qk = (&qk * &qk).mod_floor(&n_int);
        if k.bit(i) {
            let nu = half(&p * &u + &v);
            let nv = half(&d * &u + &p * &v);
            u = nu;
            v = nv;
            qk = (&qk * &q).mod_floor(&n_int);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v - &qk * 2i32).mod_floor(&n_int);
        qk = (&qk * &qk).mod_floor(&n_int);
        if v.is_zero() {
            return true;
        }
    }
    false
}

/// Baillie-PSW probable-prime test (exact below 2^64).
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    for &p in small_primes().iter().take(200) {
        if (n % p).is_zero() {
            return false;
        }
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        return false;
    }
    strong_probable_prime_base2(n) && strong_lucas_probable_prime(n)
}

/// Limits for [`factor_integer`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorBudget {
    /// Trial division runs over all primes below this bound (at most 10^6).
    pub trial_bound: u64,
    /// Total Pollard-Brent iterations allowed per composite cofactor.
    pub rho_iterations: u64,
    pub seed: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_bound: 1_000_000,
            rho_iterations: 1 << 18,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub primes: BTreeMap<BigUint, u32>,
    /// Product of composite cofactors that could not be split within budget.
    pub unfactored: BigUint,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.unfactored.is_one()
    }
}

fn pollard_brent(n: &BigUint, iterations: u64, rng: &mut ChaCha8Rng) -> Option<BigUint> {
    let one = BigUint::one();
    let mut spent = 0u64;
    while spent < iterations {
        let c = BigUint::from(rng.gen_range(1u64..u64::MAX)) % n;
        let mut y = BigUint::from(rng.gen_range(0u64..u64::MAX)) % n;
        let m = 128u64;
        let mut g = one.clone();
        let mut r = 1u64;
        let mut q = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        let f = |v: &BigUint| (v * v + &c) % n;
        while g.is_one() && spent < iterations {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (&q * diff) % n;
                }
                g = q.gcd(n);
                k += m;
                spent += m.min(r);
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && g != *n {
            return Some(g);
        }
    }
    None
}

/// Factors `n > 0` within `budget`; anything not split is reported in
/// `unfactored` rather than guessed.
pub fn factor_integer(n: &BigUint, budget: FactorBudget) -> Factorization {
    assert!(!n.is_zero(), "cannot factor zero");
    let mut primes: BTreeMap<BigUint, u32> = BTreeMap::new();
    let mut rest = n.clone();
    for &p in small_primes() {
        if p >= budget.trial_bound {
            break;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        while (&rest % p).is_zero() {
            rest /= p;
            *primes.entry(pb.clone()).or_insert(0) += 1;
        }
    }
    let mut unfactored = BigUint::one();
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            *primes.entry(m).or_insert(0) += 1;
            continue;
        }
        let r = m.sqrt();
        if &r * &r == m {
            stack.push(r.clone());
            stack.push(r);
            continue;
        }
        match pollard_brent(&m, budget.rho_iterations, &mut rng) {
            Some(d) => {
                let other = &m / &d;
                stack.push(d);
                stack.push(other);
            }
            None => unfactored *= m,
        }
    }
    Factorization { primes, unfactored }
}

/// Absolute value of a rational integer as `BigUint`.
pub fn abs_biguint(n: &BigInt) -> BigUint {
    match n.sign() {
        Sign::Minus => (-n).to_biguint().unwrap(),
        _ => n.to_biguint().unwrap(),
    }
}

pub fn factorial(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primality() {
        let primes: Vec<u64> = (0..50).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]);
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        assert!(!is_prime_u64(3_215_031_751));
        assert!(require_prime(1).is_err());
    }

    #[test]
    fn bpsw_agrees_with_sieve_and_known_primes() {
        for n in 2u64..5000 {
            assert_eq!(is_probable_prime(&BigUint::from(n)), is_prime_u64(n), "{n}");
        }
        // 2^89 - 1 and 2^127 - 1 are Mersenne primes; 2^97 - 1 is not.
        let m89 = (BigUint::one() << 89) - 1u32;
        let m127 = (BigUint::one() << 127) - 1u32;
        let m97 = (BigUint::one() << 97) - 1u32;
        assert!(is_probable_prime(&m89));
        assert!(is_probable_prime(&m127));
        assert!(!is_probable_prime(&m97));
    }

    #[test]
    fn factors_reassemble() {
        let n = BigUint::from(2u64).pow(5) * BigUint::from(1_000_003u64) * BigUint::from(1_000_033u64).pow(2);
        let f = factor_integer(&n, FactorBudget::default());
        assert!(f.is_complete());
        let back = f
            .primes
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
        assert_eq!(back, n);
        assert_eq!(f.primes.get(&BigUint::from(1_000_033u64)), Some(&2));
    }

    #[test]
    fn rho_splits_semiprime_beyond_trial_bound() {
        let p = BigUint::from(2_147_483_647u64);
        let q = BigUint::from(4_294_967_311u64);
        let f = factor_integer(&(&p * &q), FactorBudget::default());
        assert!(f.is_complete());
        assert_eq!(f.primes.len(), 2);
    }

    #[test]
    fn exhausted_budget_reports_unfactored() {
        let p = BigUint::from(2_147_483_647u64);
        let q = BigUint::from(4_294_967_311u64);
        let tight = FactorBudget { trial_bound: 100, rho_iterations: 0, seed: 1 };
        let f = factor_integer(&(&p * &q * 4u32), tight);
        assert_eq!(f.unfactored, &p * &q);
        assert_eq!(f.primes.get(&BigUint::from(2u32)), Some(&2));
    }

    #[test]
    fn valuations() {
        assert_eq!(int_valuation(&BigInt::from(-96), 2), 5);
        let q = BigRational::new(BigInt::from(9), BigInt::from(8));
        assert_eq!(rat_valuation(&q, 2), -3);
        assert_eq!(rat_valuation(&q, 3), 2);
    }

    #[test]
    fn totients() {
        assert_eq!(euler_totient(1), 1);
        assert_eq!(euler_totient(9), 6);
        assert_eq!(euler_totient(256), 128);
        assert_eq!(euler_totient(15), 8);
    }
}
