//! Resultants, discriminants, and symmetric-function machinery.
//!
//! Sign convention: `Res(f, g) = lc(f)^deg(g) * prod g(a)` over the roots `a`
//! of `f`, so `Res(X - a, X - b) = a - b`.
//!
//! Characteristic polynomials of algebraic elements and the polynomial whose
//! roots are all pairwise root differences are computed over Z through power
//! sums and Newton's identities. The resultant is kept as an independent route
//! for cross-checking.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::poly::RatPoly;

pub fn resultant(f: &RatPoly, g: &RatPoly) -> Result<BigRational> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut a = f.clone();
    let mut b = g.clone();
    let mut acc = BigRational::one();
    loop {
        let m = a.deg();
        let n = b.deg();
        if n == 0 {
            return Ok(acc * Pow::pow(b.lc(), m));
        }
        if m == 0 {
            return Ok(acc * Pow::pow(a.lc(), n));
        }
        let r = a.rem(&b);
        if r.is_zero() {
            return Ok(BigRational::zero());
        }
        if (m * n) % 2 == 1 {
            acc = -acc;
        }
        acc *= Pow::pow(b.lc(), m - r.deg());
        a = b;
        b = r;
    }
}

/// `disc(f) = (-1)^(n(n-1)/2) Res(f, f') / lc(f)`.
pub fn discriminant(f: &RatPoly) -> Result<BigRational> {
    let n = match f.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::Domain("discriminant needs degree >= 1".into())),
    };
    let r = resultant(f, &f.derivative())? / f.lc();
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -r } else { r })
}

/// Integer polynomials as ascending coefficient vectors.
pub(crate) mod zpoly {
    use super::*;

    pub fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    }

    pub fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        trim(out)
    }

    /// Remainder modulo a monic integer polynomial.
    pub fn rem_monic(a: &[BigInt], m: &[BigInt]) -> Vec<BigInt> {
        let n = m.len() - 1;
        let mut r = a.to_vec();
        if r.len() <= n {
            return trim(r);
        }
        for k in (n..r.len()).rev() {
            let c = std::mem::take(&mut r[k]);
            if c.is_zero() {
                continue;
            }
            for (j, mj) in m.iter().enumerate().take(n) {
                if !mj.is_zero() {
                    r[k - n + j] -= &c * mj;
                }
            }
        }
        r.truncate(n);
        trim(r)
    }

    /// Power sums `p_0..=p_count` of the roots of a monic integer polynomial.
    pub fn power_sums(m: &[BigInt], count: usize) -> Vec<BigInt> {
        let n = m.len() - 1;
        let a = |i: usize| &m[i];
        let mut p = Vec::with_capacity(count + 1);
        p.push(BigInt::from(n));
        for k in 1..=count {
            let mut s = BigInt::zero();
            for i in 1..=k.min(n) {
                if i < k {
                    s += a(n - i) * &p[k - i];
                }
            }
            if k <= n {
                s += a(n - k) * BigInt::from(k);
            }
            p.push(-s);
        }
        p
    }

    /// Monic degree-`t.len()` polynomial whose roots have power sums `t[0] = p_1, t[1] = p_2, ...`.
    pub fn from_power_sums(t: &[BigInt]) -> Vec<BigInt> {
        let n = t.len();
        // c[i] is the coefficient of X^(n - i).
        let mut c = vec![BigInt::one()];
        for k in 1..=n {
            let mut s = t[k - 1].clone();
            for i in 1..k {
                s += &c[i] * &t[k - i - 1];
            }
            let (q, r) = num_integer::Integer::div_rem(&s, &BigInt::from(k));
            assert!(r.is_zero(), "power sums do not come from an integral polynomial");
            c.push(-q);
        }
        c.reverse();
        c
    }

    pub fn trace(g: &[BigInt], sums: &[BigInt]) -> BigInt {
        g.iter()
            .zip(sums)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, s)| c * s)
            .sum()
    }

    /// Characteristic polynomial of `h(a)` over the roots `a` of monic integer `m`.
    pub fn char_poly(h: &[BigInt], m: &[BigInt]) -> Vec<BigInt> {
        let n = m.len() - 1;
        let sums = power_sums(m, n - 1);
        let h = rem_monic(h, m);
        let mut cur = vec![BigInt::one()];
        let mut traces = Vec::with_capacity(n);
        for _ in 0..n {
            cur = rem_monic(&mul(&cur, &h), m);
            traces.push(trace(&cur, &sums));
        }
        from_power_sums(&traces)
    }
}

fn int_coeffs_monic(f: &RatPoly) -> Result<Vec<BigInt>> {
    f.require_monic_integer()?;
    if f.deg() == 0 {
        return Err(Error::Domain("degree-0 modulus".into()));
    }
    Ok(f.int_coeffs().expect("checked integral"))
}

/// Monic polynomial of degree `deg m` whose roots are `h(a)` for the roots `a`
/// of the monic integer polynomial `m`, with multiplicity.
pub fn char_poly_mod(h: &RatPoly, m: &RatPoly) -> Result<RatPoly> {
    let mi = int_coeffs_monic(m)?;
    let n = mi.len() - 1;
    let den = h.denominator_lcm();
    let scaled = h.scale(&BigRational::from_integer(den.clone()));
    let hi = scaled.int_coeffs().expect("denominators cleared");
    let chi = zpoly::char_poly(&hi, &mi);
    // chi_h(X) = den^(-n) chi_H(den X)
    Ok(RatPoly::new(
        chi.into_iter()
            .enumerate()
            .map(|(i, c)| BigRational::new(c, Pow::pow(&den, n - i)))
            .collect(),
    ))
}

/// Monic polynomial of degree `deg f * deg g` whose roots are `b - a` over all
/// roots `a` of `f` and `b` of `g` (both monic with integer coefficients).
pub fn difference_poly(f: &RatPoly, g: &RatPoly) -> Result<RatPoly> {
    let fi = int_coeffs_monic(f)?;
    let gi = int_coeffs_monic(g)?;
    let k = (fi.len() - 1) * (gi.len() - 1);
    let pf = zpoly::power_sums(&fi, k);
    let pg = zpoly::power_sums(&gi, k);
    let mut binom = vec![BigInt::one()];
    let mut sums = Vec::with_capacity(k);
    for order in 1..=k {
        let mut next = vec![BigInt::one(); order + 1];
        for j in 1..order {
            next[j] = &binom[j - 1] + &binom[j];
        }
        binom = next;
        let mut s = BigInt::zero();
        for j in 0..=order {
            let term = &binom[j] * &pg[j] * &pf[order - j];
            if (order - j) % 2 == 1 {
                s -= term;
            } else {
                s += term;
            }
        }
        sums.push(s);
    }
    Ok(RatPoly::from_bigints(&zpoly::from_power_sums(&sums)))
}
