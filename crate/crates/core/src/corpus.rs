//! Deterministic corpora of small algebraic integers used for sampled checks.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::element::{AlgebraicElement, Irreducibility};
use crate::error::Result;
use crate::poly::RatPoly;

/// Rational integers `-h..=h`.
pub fn small_integers(height: i64) -> Vec<AlgebraicElement> {
    (-height..=height).map(AlgebraicElement::integer).collect()
}

/// Roots of the irreducible `x^2 + b x + c` with `|b|, |c| <= height`.
pub fn quadratic_integers(height: i64) -> Vec<AlgebraicElement> {
    let mut out = Vec::new();
    for b in -height..=height {
        for c in -height..=height {
            let disc = b * b - 4 * c;
            let r = (disc.max(0) as f64).sqrt().round() as i64;
            if disc >= 0 && r * r == disc {
                continue;
            }
            let f = RatPoly::from_ints(&[c, b, 1]);
            out.push(AlgebraicElement::with_certificate(f, RatPoly::x(), Irreducibility::NoRationalRoot).expect("monic"));
        }
    }
    out
}

/// Algebraic integers of degree at most 2 and height at most `height`.
pub fn degree_two_corpus(height: i64) -> Vec<AlgebraicElement> {
    let mut out = small_integers(height);
    out.extend(quadratic_integers(height));
    out
}

/// `count` distinct roots of random monic polynomials of degree `1..=max_degree`
/// with coefficients in `-height..=height`, each certified irreducible.
pub fn sample_irreducibles(count: usize, max_degree: usize, height: i64, seed: u64) -> Vec<AlgebraicElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut attempts = 0usize;
    while out.len() < count && attempts < count * 200 {
        attempts += 1;
        let deg = rng.gen_range(1..=max_degree);
        let mut coeffs: Vec<i64> = (0..deg).map(|_| rng.gen_range(-height..=height)).collect();
        coeffs.push(1);
        if !seen.insert(coeffs.clone()) {
            continue;
        }
        let Ok(e) = AlgebraicElement::root(RatPoly::from_ints(&coeffs)) else {
            continue;
        };
        if e.certificate().is_certified() {
            out.push(e);
        }
    }
    out
}

/// `d` times the element, presented over the root `d a` of the scaled minimal
/// polynomial `a_i -> a_i d^(n-i)`.
pub fn scale_root(e: &AlgebraicElement, d: i64) -> Result<AlgebraicElement> {
    let n = e.degree();
    let d = BigInt::from(d);
    let coeffs: Vec<BigRational> = e
        .min_poly()
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, a)| a * BigRational::from_integer(num_traits::pow(d.clone(), n - i)))
        .collect();
    let min_poly = RatPoly::new(coeffs);
    let dq = BigRational::from_integer(d);
    let inv = RatPoly::monomial(dq.recip(), 1);
    let expr = e.expr().compose(&inv).scale(&dq).rem(&min_poly);
    AlgebraicElement::with_certificate(min_poly, expr, e.certificate().clone())
}

/// The default sampled corpus: degree at most 4, height at most 10.
pub fn default_corpus(count: usize, seed: u64) -> Vec<AlgebraicElement> {
    sample_irreducibles(count, 4, 10, seed)
}
