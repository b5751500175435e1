//! Newton polygons and the p-adic valuations they determine: of roots, of
//! algebraic elements over all conjugates, and of differences of roots.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{rat_valuation, require_prime};
use crate::element::AlgebraicElement;
use crate::error::{Error, Result};
use crate::poly::RatPoly;
use crate::resultant::difference_poly;
use crate::val::{rational_string, to_multiset, Val, ValMultiset};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    /// Valuation shared by every root on this edge.
    #[serde(with = "rational_string")]
    pub slope: BigRational,
    /// Number of roots on this edge.
    pub length: usize,
}

/// Segments are listed by strictly increasing root valuation; roots equal to
/// zero are stripped first and counted in `zero_roots`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    pub prime: u64,
    pub zero_roots: usize,
    pub segments: Vec<Segment>,
}

impl NewtonPolygon {
    pub fn root_count(&self) -> usize {
        self.zero_roots + self.segments.iter().map(|s| s.length).sum::<usize>()
    }
}

fn cross(o: (i64, &BigRational), a: (i64, &BigRational), b: (i64, &BigRational)) -> BigRational {
    // (a - o) x (b - o); positive for a counter-clockwise turn
    let ax = BigRational::from_integer(BigInt::from(a.0 - o.0));
    let bx = BigRational::from_integer(BigInt::from(b.0 - o.0));
    ax * (b.1 - o.1) - bx * (a.1 - o.1)
}

pub fn newton_polygon(f: &RatPoly, p: u64) -> Result<NewtonPolygon> {
    require_prime(p)?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_p_integral(p) {
        return Err(Error::NotPIntegral { p, poly: f.to_string() });
    }
    let coeffs = f.coeffs();
    let zero_roots = coeffs.iter().position(|c| !c.is_zero()).expect("nonzero");
    let pts: Vec<(i64, BigRational)> = coeffs
        .iter()
        .enumerate()
        .skip(zero_roots)
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i as i64, BigRational::from_integer(rat_valuation(c, p).into())))
        .collect();
    // Monotone chain, lower hull, collinear points dropped.
    let mut hull: Vec<(i64, BigRational)> = Vec::new();
    for pt in pts {
        while hull.len() >= 2 {
            let n = hull.len();
            let turn = cross(
                (hull[n - 2].0, &hull[n - 2].1),
                (hull[n - 1].0, &hull[n - 1].1),
                (pt.0, &pt.1),
            );
            if turn <= BigRational::zero() {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut segments: Vec<Segment> = hull
        .windows(2)
        .map(|w| {
            let len = w[1].0 - w[0].0;
            Segment {
                slope: (&w[0].1 - &w[1].1) / BigRational::from_integer(len.into()),
                length: len as usize,
            }
        })
        .collect();
    segments.reverse();
    Ok(NewtonPolygon { prime: p, zero_roots, segments })
}

/// Root valuations with multiplicity; zero roots count as infinity.
pub fn root_valuations(f: &RatPoly, p: u64) -> Result<ValMultiset> {
    let np = newton_polygon(f, p)?;
    let mut out: ValMultiset = np
        .segments
        .into_iter()
        .map(|s| (Val::Finite(s.slope), s.length))
        .collect();
    if np.zero_roots > 0 {
        out.push((Val::Infinity, np.zero_roots));
    }
    Ok(out)
}

/// Valuations of the element over every conjugate embedding.
pub fn element_valuations(e: &AlgebraicElement, p: u64) -> Result<ValMultiset> {
    require_prime(p)?;
    let chi = e.char_poly();
    if chi.is_p_integral(p) {
        return root_valuations(&chi, p);
    }
    // Negative valuations: multiply the roots by p until the polynomial is p-integral.
    let p_rat = BigRational::from_integer(BigInt::from(p));
    let mut shift = 0i64;
    let mut g = chi;
    while !g.is_p_integral(p) {
        shift += 1;
        g = scale_roots(&g, &p_rat);
    }
    let shifted = root_valuations(&g, p)?;
    Ok(shifted
        .into_iter()
        .map(|(v, m)| match v {
            Val::Finite(q) => (Val::Finite(q - BigRational::from_integer(shift.into())), m),
            Val::Infinity => (Val::Infinity, m),
        })
        .collect())
}

/// The monic polynomial whose roots are `c` times the roots of monic `f`.
pub fn scale_roots(f: &RatPoly, c: &BigRational) -> RatPoly {
    let n = f.deg();
    let mut power = BigRational::from_integer(1.into());
    let mut coeffs = vec![BigRational::zero(); n + 1];
    for i in (0..=n).rev() {
        coeffs[i] = f.coeff(i) * &power;
        power *= c;
    }
    RatPoly::new(coeffs).monic()
}

/// `v_p(b - a)` over every pair of roots `a` of `f` and `b` of `g`, including
/// equal roots as infinity.
pub fn difference_valuations(f: &RatPoly, g: &RatPoly, p: u64) -> Result<ValMultiset> {
    require_prime(p)?;
    let d = difference_poly(f, g)?;
    root_valuations(&d, p)
}

/// Multiset as a flat sorted list.
pub fn flatten(ms: &ValMultiset) -> Vec<Val> {
    let mut out = Vec::new();
    for (v, m) in ms {
        out.extend(std::iter::repeat(v.clone()).take(*m));
    }
    out.sort();
    out
}

/// Normalizes a multiset (merging equal values, ascending order).
pub fn normalize(ms: &ValMultiset) -> ValMultiset {
    to_multiset(flatten(ms))
}
