//! Generators for the standard example sequences of algebraic integers, each
//! with a closed-form valuation formula that can be checked against Newton
//! polygons on small instances.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{first_primes, int_valuation, is_prime_u64, require_prime, DEFAULT_SEED};
use crate::closure::{closure_member, IvpGenerator};
use crate::corpus::{default_corpus, scale_root};
use crate::element::{AlgebraicElement, Irreducibility};
use crate::error::{Error, Result};
use crate::index::{dedekind_divides_index, index_one_certificate, TriState};
use crate::ivp::is_integral_value;
use crate::newton::{difference_valuations, element_valuations, normalize};
use crate::poly::RatPoly;
use crate::sequence::{classify_prefix, ClassificationReport, SequenceKind, ValuationMatrix};
use crate::val::{Val, ValMultiset};
use crate::verify::Status;

pub const CYCLOTOMIC_LIMIT: u64 = 256;
pub const TOWER_DEGREE_LIMIT: u64 = 128;
pub const RADICAL_DEGREE_LIMIT: u64 = 64;
pub const DEFAULT_CROSSCHECK_BUDGET: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilyKind {
    /// `zeta_{p^k}` for `k = 1, 2, ...`.
    RootsOfUnityPPower { p: u64 },
    /// `zeta_q` for `q = 2, 3, 5, ...`.
    RootsOfUnityPrimes,
    /// `p^{b_k}` with `b_k = (1 - n^-k)/(n - 1)`, so that `s_k^n = p s_{k-1}`.
    NthRootTower { p: u64, n: u32 },
    /// `(p_1 p_2 ... p_k)^(1/k)`.
    PrimeProductRadicals,
    /// Roots of `x^q + c^3 x^(q-1) + c^2` for the primes `q` not dividing `c`.
    FcnFamily { c: u64 },
    /// `d` times roots of a sampled corpus of monic irreducibles.
    ScaledRing { d: u64 },
}

impl FamilyKind {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::RootsOfUnityPPower { .. } => "roots-of-unity-p-power",
            FamilyKind::RootsOfUnityPrimes => "roots-of-unity-primes",
            FamilyKind::NthRootTower { .. } => "nth-root-tower",
            FamilyKind::PrimeProductRadicals => "prime-product-radicals",
            FamilyKind::FcnFamily { .. } => "fcn-family",
            FamilyKind::ScaledRing { .. } => "scaled-ring",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceSample {
    pub kind: FamilyKind,
    pub len: usize,
    pub elements: Vec<AlgebraicElement>,
    pub labels: Vec<String>,
    pub provenance: String,
}

/// The `m`-th cyclotomic polynomial, by exact division of `x^m - 1` by the
/// smaller cyclotomic factors.
pub fn cyclotomic(m: u64) -> Result<RatPoly> {
    if m == 0 {
        return Err(Error::Domain("cyclotomic index must be positive".into()));
    }
    if m > CYCLOTOMIC_LIMIT {
        return Err(Error::BudgetExceeded(format!("cyclotomic index {m} > {CYCLOTOMIC_LIMIT}")));
    }
    let mut cache: BTreeMap<u64, RatPoly> = BTreeMap::new();
    for d in (1..=m).filter(|d| m % d == 0) {
        let mut f = &RatPoly::monomial(BigRational::one(), d as usize) - &RatPoly::one();
        for (_, g) in cache.iter().filter(|(e, _)| d % **e == 0) {
            f = f.exact_div(g).expect("cyclotomic factor divides");
        }
        cache.insert(d, f);
    }
    Ok(cache.remove(&m).expect("m divides itself"))
}

pub fn cyclotomic_element(m: u64) -> Result<AlgebraicElement> {
    AlgebraicElement::with_certificate(cyclotomic(m)?, RatPoly::x(), Irreducibility::Cyclotomic { order: m })
}

fn checked_pow(base: u64, exp: usize, limit: u64) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.checked_mul(base).filter(|&a| a <= limit)?;
    }
    Some(acc)
}

/// The primes not dividing `c`, in increasing order.
fn primes_coprime_to(c: u64, count: usize) -> Vec<u64> {
    (2u64..).filter(|&q| is_prime_u64(q) && c % q != 0).take(count).collect()
}

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

pub fn make_family(kind: &FamilyKind, len: usize) -> Result<SequenceSample> {
    make_family_seeded(kind, len, DEFAULT_SEED)
}

/// Builds the first `len` members; element `i` is the family member with
/// index `k = i + 1`. The seed only affects the scaled-ring sampler.
pub fn make_family_seeded(kind: &FamilyKind, len: usize, seed: u64) -> Result<SequenceSample> {
    let mut elements = Vec::with_capacity(len);
    let mut labels = Vec::with_capacity(len);
    let provenance;
    match *kind {
        FamilyKind::RootsOfUnityPPower { p } => {
            require_prime(p)?;
            checked_pow(p, len, CYCLOTOMIC_LIMIT)
                .ok_or_else(|| Error::BudgetExceeded(format!("{p}^{len} > {CYCLOTOMIC_LIMIT}")))?;
            for k in 1..=len {
                let m = p.pow(k as u32);
                elements.push(cyclotomic_element(m)?);
                labels.push(format!("zeta_{m}"));
            }
            provenance = format!("primitive {p}-power roots of unity; v(zeta_(p^j) - zeta_(p^k)) = 1/(p^(k-1)(p-1)) at p = {p} for j < k, 0 elsewhere");
        }
        FamilyKind::RootsOfUnityPrimes => {
            let qs = first_primes(len);
            if qs.last().is_some_and(|&q| q > CYCLOTOMIC_LIMIT) {
                return Err(Error::BudgetExceeded(format!("prime-order roots of unity limited to order {CYCLOTOMIC_LIMIT}")));
            }
            for q in qs {
                elements.push(cyclotomic_element(q)?);
                labels.push(format!("zeta_{q}"));
            }
            provenance = "roots of unity of distinct prime orders; zeta_q - zeta_r is a unit, so every difference has valuation 0".into();
        }
        FamilyKind::NthRootTower { p, n } => {
            require_prime(p)?;
            if n < 2 {
                return Err(Error::Domain(format!("tower root degree must be >= 2, got {n}")));
            }
            checked_pow(n as u64, len, TOWER_DEGREE_LIMIT)
                .ok_or_else(|| Error::BudgetExceeded(format!("tower degree {n}^{len} > {TOWER_DEGREE_LIMIT}")))?;
            for k in 1..=len {
                let deg = (n as u64).pow(k as u32);
                let exp = (deg - 1) / (n as u64 - 1);
                let f = &RatPoly::monomial(BigRational::one(), deg as usize)
                    - &RatPoly::constant(BigRational::from_integer(num_traits::pow(big(p), exp as usize)));
                elements.push(AlgebraicElement::new(f, RatPoly::x())?);
                labels.push(format!("{p}^({exp}/{deg})"));
            }
            provenance = format!("tower s_k = {p}^(b_k), b_k = (1 - {n}^-k)/({n} - 1); s_k^{n} = {p} s_(k-1), so x^{n}/{p} is integral on the sequence");
        }
        FamilyKind::PrimeProductRadicals => {
            if len as u64 > RADICAL_DEGREE_LIMIT {
                return Err(Error::BudgetExceeded(format!("radical degree {len} > {RADICAL_DEGREE_LIMIT}")));
            }
            let mut product = BigInt::one();
            for (k, q) in first_primes(len).into_iter().enumerate() {
                product *= q;
                let k = k + 1;
                let f = &RatPoly::monomial(BigRational::one(), k) - &RatPoly::constant(BigRational::from_integer(product.clone()));
                elements.push(AlgebraicElement::new(f, RatPoly::x())?);
                labels.push(format!("({product})^(1/{k})"));
            }
            provenance = "s_k = (p_1 ... p_k)^(1/k); at the n-th prime v(s_k) = 0 for k < n and 1/k for k >= n".into();
        }
        FamilyKind::FcnFamily { c } => {
            if c < 2 {
                return Err(Error::Domain(format!("fcn family needs c >= 2, got {c}")));
            }
            let qs = primes_coprime_to(c, len);
            if qs.last().is_some_and(|&q| q > RADICAL_DEGREE_LIMIT) {
                return Err(Error::BudgetExceeded(format!("fcn degree limited to {RADICAL_DEGREE_LIMIT}")));
            }
            for q in qs {
                let f = fcn_poly(c, q as usize);
                elements.push(AlgebraicElement::new(f, RatPoly::x())?);
                labels.push(format!("root of x^{q} + {}x^{} + {}", c * c * c, q - 1, c * c));
            }
            provenance = format!("roots of x^q + c^3 x^(q-1) + c^2 with c = {c}, q ranging over primes not dividing c; v_p(root) = 2 v_p(c)/q for p | c");
        }
        FamilyKind::ScaledRing { d } => {
            if d == 0 {
                return Err(Error::Domain("scale factor must be positive".into()));
            }
            for e in default_corpus(len, seed) {
                labels.push(format!("{d}*root of {}", e.min_poly()));
                elements.push(scale_root(&e, d as i64)?);
            }
            provenance = format!("{d} times roots of random monic irreducibles of degree <= 4 and height <= 10; x/{d} is integral on every member");
        }
    }
    Ok(SequenceSample { kind: kind.clone(), len: elements.len(), elements, labels, provenance })
}

/// `x^n + c^3 x^(n-1) + c^2`.
pub fn fcn_poly(c: u64, n: usize) -> RatPoly {
    let c = big(c);
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[0] = BigRational::from_integer(&c * &c);
    coeffs[n - 1] += BigRational::from_integer(&c * &c * &c);
    coeffs[n] = BigRational::one();
    RatPoly::new(coeffs)
}

fn tower_b(n: u32, k: usize) -> BigRational {
    let nk = num_traits::pow(big(n as u64), k);
    BigRational::new(&nk - 1, nk * (n - 1))
}

/// Position (1-based) of `p` in the list of primes.
fn prime_position(p: u64) -> usize {
    (2..=p).filter(|&q| is_prime_u64(q)).count()
}

impl SequenceSample {
    /// Closed-form `v_p` of element `i`, where the family provides one.
    pub fn element_valuation(&self, i: usize, p: u64) -> Option<Val> {
        let k = i + 1;
        match self.kind {
            FamilyKind::RootsOfUnityPPower { .. } | FamilyKind::RootsOfUnityPrimes => Some(Val::zero()),
            FamilyKind::NthRootTower { p: q, n } => Some(if p == q { Val::Finite(tower_b(n, k)) } else { Val::zero() }),
            FamilyKind::PrimeProductRadicals => {
                let pos = prime_position(p);
                Some(if k < pos { Val::zero() } else { Val::ratio(1, k as i64) })
            }
            FamilyKind::FcnFamily { c } => {
                let q = self.elements[i].degree() as i64;
                Some(Val::ratio(2 * int_valuation(&big(c), p) as i64, q))
            }
            FamilyKind::ScaledRing { .. } => None,
        }
    }

    /// Closed-form `v_p(s_i - s_j)`, shared by every conjugate pair, where the
    /// family provides one.
    pub fn pair_valuation(&self, i: usize, j: usize, p: u64) -> Option<Val> {
        if i == j {
            return Some(Val::Infinity);
        }
        let (lo, hi) = (i.min(j), i.max(j));
        match self.kind {
            FamilyKind::RootsOfUnityPPower { p: q } => {
                if p != q {
                    return Some(Val::zero());
                }
                let k = hi as u32;
                let den = num_traits::pow(big(q), k as usize) * (q - 1);
                Some(Val::Finite(BigRational::new(BigInt::one(), den)))
            }
            FamilyKind::RootsOfUnityPrimes => Some(Val::zero()),
            FamilyKind::ScaledRing { .. } => None,
            _ => {
                let a = self.element_valuation(lo, p)?;
                let b = self.element_valuation(hi, p)?;
                (a != b).then(|| a.min(b))
            }
        }
    }

    /// Expected classification of the sequence at `p`, where one is known.
    pub fn expected_kind(&self, p: u64) -> Option<SequenceKind> {
        match self.kind {
            FamilyKind::RootsOfUnityPPower { p: q } if q == p => Some(SequenceKind::PseudoDivergent),
            FamilyKind::RootsOfUnityPPower { .. } | FamilyKind::RootsOfUnityPrimes => Some(SequenceKind::PseudoStationary),
            FamilyKind::NthRootTower { p: q, .. } if q == p => Some(SequenceKind::PseudoConvergent),
            FamilyKind::PrimeProductRadicals => Some(SequenceKind::PseudoDivergent),
            FamilyKind::FcnFamily { c } if c % p == 0 => Some(SequenceKind::PseudoDivergent),
            _ => None,
        }
    }

    /// First member of the tail on which the formula describes a
    /// pseudo-monotone sequence at `p`.
    pub fn tail_start(&self, p: u64) -> Option<usize> {
        match self.kind {
            FamilyKind::RootsOfUnityPPower { .. } | FamilyKind::RootsOfUnityPrimes => Some(0),
            FamilyKind::NthRootTower { p: q, .. } => (q == p).then_some(0),
            FamilyKind::PrimeProductRadicals => Some(prime_position(p) - 1),
            FamilyKind::FcnFamily { c } => (c % p == 0).then_some(0),
            FamilyKind::ScaledRing { .. } => None,
        }
    }

    /// Formula values on the tail `tail_start(p)..len` as a valuation matrix.
    pub fn formula_matrix(&self, p: u64) -> Option<(usize, ValuationMatrix)> {
        let n = self.elements.len();
        let start = self.tail_start(p).filter(|&s| s < n)?;
        let mut entries = vec![vec![Val::Infinity; n - start]; n - start];
        for i in 0..n - start {
            for j in 0..n - start {
                entries[i][j] = self.pair_valuation(start + i, start + j, p)?;
            }
        }
        let m = ValuationMatrix::new(entries, Some(self.labels[start..].to_vec())).ok()?;
        Some((start, m))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCheck {
    pub i: usize,
    pub j: usize,
    pub formula: Val,
    pub computed: ValMultiset,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementCheck {
    pub i: usize,
    pub formula: Val,
    pub computed: ValMultiset,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCrossCheck {
    pub prime: u64,
    pub budget: usize,
    pub elements: Vec<ElementCheck>,
    pub pairs: Vec<PairCheck>,
    /// Pairs with a formula whose degree product exceeded the budget.
    pub skipped: usize,
    pub all_agree: bool,
}

fn uniform(ms: &ValMultiset, expected: &Val) -> bool {
    ms.iter().all(|(v, _)| v == expected)
}

/// Recomputes every in-budget formula value from minimal polynomials.
pub fn crosscheck_family(sample: &SequenceSample, p: u64, budget: usize) -> Result<FamilyCrossCheck> {
    require_prime(p)?;
    let n = sample.elements.len();
    let mut elements = Vec::new();
    let mut pairs = Vec::new();
    let mut skipped = 0;
    for i in 0..n {
        let e = &sample.elements[i];
        if let Some(formula) = sample.element_valuation(i, p) {
            if e.degree() <= budget {
                let computed = normalize(&element_valuations(e, p)?);
                let agree = uniform(&computed, &formula);
                elements.push(ElementCheck { i, formula, computed, agree });
            }
        }
        for j in i + 1..n {
            let Some(formula) = sample.pair_valuation(i, j, p) else { continue };
            let g = &sample.elements[j];
            if e.degree() * g.degree() > budget {
                skipped += 1;
                continue;
            }
            let computed = normalize(&difference_valuations(e.min_poly(), g.min_poly(), p)?);
            let agree = uniform(&computed, &formula);
            pairs.push(PairCheck { i, j, formula, computed, agree });
        }
    }
    let all_agree = elements.iter().all(|c| c.agree) && pairs.iter().all(|c| c.agree);
    Ok(FamilyCrossCheck { prime: p, budget, elements, pairs, skipped, all_agree })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Conclusion {
    Trivial,
    Nontrivial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mechanism", rename_all = "kebab-case")]
pub enum Mechanism {
    /// Every member generates its full ring of integers.
    IndexOne,
    /// `f/d` is integral on every member.
    ExplicitGenerator { generator: IvpGenerator },
    /// At the given prime the valuations form a pseudo-divergent sequence
    /// tending to 0.
    PseudoDivergentToZero,
    /// Members of growing degree with index prime to `p`.
    IndexCoprime,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MechanismCheck {
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyVerdict {
    pub family: String,
    pub prime: u64,
    pub tail_start: Option<usize>,
    pub classification: Option<ClassificationReport>,
    pub expected_kind: Option<SequenceKind>,
    pub conclusion: Conclusion,
    pub mechanism: Mechanism,
    pub check: MechanismCheck,
}

fn check(status: Status, detail: impl Into<String>) -> MechanismCheck {
    MechanismCheck { status, detail: detail.into() }
}

fn check_index_one(sample: &SequenceSample) -> Result<MechanismCheck> {
    let mut unknown = Vec::new();
    for (e, label) in sample.elements.iter().zip(&sample.labels) {
        match index_one_certificate(e.min_poly())?.index_is_one {
            TriState::Yes => {}
            TriState::No => return Ok(check(Status::Fail, format!("index of {label} exceeds 1"))),
            TriState::Unknown => unknown.push(label.clone()),
        }
    }
    Ok(if unknown.is_empty() {
        check(Status::Pass, format!("index 1 certified for all {} members", sample.elements.len()))
    } else {
        check(Status::Inconclusive, format!("index undecided for {}", unknown.join(", ")))
    })
}

fn check_generator(sample: &SequenceSample, gen: &IvpGenerator) -> Result<MechanismCheck> {
    for (e, label) in sample.elements.iter().zip(&sample.labels) {
        let value = e.apply(gen.f());
        if !is_integral_value(&value, gen.d())? || !closure_member(std::slice::from_ref(gen), e)? {
            return Ok(check(Status::Fail, format!("({})/{} not integral at {label}", gen.f(), gen.d())));
        }
    }
    Ok(check(Status::Pass, format!("({})/{} integral on all {} members", gen.f(), gen.d(), sample.elements.len())))
}

fn check_divergent(report: Option<&ClassificationReport>) -> MechanismCheck {
    match report {
        Some(r) if r.kind == SequenceKind::PseudoDivergent => {
            check(Status::Pass, format!("pseudo-divergent tail, breadth {} ({})", r.breadth.as_ref().expect("breadth"), r.note))
        }
        Some(r) if r.kind == SequenceKind::None && r.note.starts_with("insufficient") => {
            check(Status::Inconclusive, format!("tail too short: {}", r.note))
        }
        Some(r) => check(Status::Fail, format!("tail classified as {:?}", r.kind)),
        None => check(Status::Inconclusive, "no tail with a closed-form valuation formula"),
    }
}

fn check_index_coprime(sample: &SequenceSample, p: u64) -> Result<MechanismCheck> {
    let mut coprime = Vec::new();
    for (e, label) in sample.elements.iter().zip(&sample.labels) {
        if !dedekind_divides_index(e.min_poly(), p)?.divides {
            coprime.push(format!("{label} (degree {})", e.degree()));
        }
    }
    Ok(match coprime.last() {
        Some(last) => check(
            Status::Pass,
            format!("{p} does not divide the index of {} members, largest {last}; prefix-certified", coprime.len()),
        ),
        None => check(Status::Fail, format!("{p} divides the index of every member")),
    })
}

/// Classifies the formula matrix at `p` and attaches the global conclusion with
/// a mechanism verified on the prefix.
pub fn family_verdict(sample: &SequenceSample, p: u64) -> Result<FamilyVerdict> {
    require_prime(p)?;
    let tail = sample.formula_matrix(p);
    let classification = tail.as_ref().map(|(_, m)| classify_prefix(m));
    let (conclusion, mechanism, mcheck) = match sample.kind {
        FamilyKind::RootsOfUnityPPower { .. } | FamilyKind::RootsOfUnityPrimes => {
            (Conclusion::Trivial, Mechanism::IndexOne, check_index_one(sample)?)
        }
        FamilyKind::NthRootTower { p: q, n } => {
            let generator = IvpGenerator::new(RatPoly::monomial(BigRational::one(), n as usize), q)?;
            let c = check_generator(sample, &generator)?;
            (Conclusion::Nontrivial, Mechanism::ExplicitGenerator { generator }, c)
        }
        FamilyKind::ScaledRing { d } => {
            let generator = IvpGenerator::new(RatPoly::x(), d)?;
            let c = check_generator(sample, &generator)?;
            (Conclusion::Nontrivial, Mechanism::ExplicitGenerator { generator }, c)
        }
        FamilyKind::PrimeProductRadicals => {
            (Conclusion::Trivial, Mechanism::PseudoDivergentToZero, check_divergent(classification.as_ref()))
        }
        FamilyKind::FcnFamily { c } if c % p == 0 => {
            (Conclusion::Trivial, Mechanism::PseudoDivergentToZero, check_divergent(classification.as_ref()))
        }
        FamilyKind::FcnFamily { .. } => (Conclusion::Trivial, Mechanism::IndexCoprime, check_index_coprime(sample, p)?),
    };
    Ok(FamilyVerdict {
        family: sample.kind.name().into(),
        prime: p,
        tail_start: tail.map(|(s, _)| s),
        classification,
        expected_kind: sample.expected_kind(p),
        conclusion,
        mechanism,
        check: mcheck,
    })
}

/// For tower member `i`: `s_i^n / p` is integral and its characteristic
/// polynomial is divisible by the minimal polynomial of `s_(i-1)` (with
/// `s_0 = 1`). Returns the characteristic polynomial and both facts.
pub fn tower_descent(sample: &SequenceSample, i: usize) -> Result<(RatPoly, bool, bool)> {
    let FamilyKind::NthRootTower { p, n } = sample.kind else {
        return Err(Error::Domain("tower descent needs an nth-root-tower sample".into()));
    };
    let e = &sample.elements[i];
    let value = e.apply(&RatPoly::monomial(BigRational::one(), n as usize));
    let integral = is_integral_value(&value, p)?;
    let cp = value.scaled(&BigRational::new(BigInt::one(), big(p))).char_poly();
    let prev = if i == 0 { RatPoly::from_ints(&[-1, 1]) } else { sample.elements[i - 1].min_poly().clone() };
    let divisible = prev.divides(&cp);
    Ok((cp, integral, divisible))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::euler_totient;
    use proptest::prelude::*;

    fn p(s: &str) -> RatPoly {
        s.parse().unwrap()
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1).unwrap(), p("x - 1"));
        assert_eq!(cyclotomic(2).unwrap(), p("x + 1"));
        assert_eq!(cyclotomic(8).unwrap(), p("x^4 + 1"));
        assert_eq!(cyclotomic(12).unwrap(), p("x^4 - x^2 + 1"));
        assert_eq!(cyclotomic(105).unwrap().coeff(7), rat_i(-2));
        assert!(matches!(cyclotomic(257), Err(Error::BudgetExceeded(_))));
    }

    fn rat_i(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    proptest! {
        #[test]
        fn cyclotomic_degree_is_totient(m in 1u64..=256) {
            let f = cyclotomic(m).unwrap();
            prop_assert!(f.is_monic_integer());
            prop_assert_eq!(f.deg() as u64, euler_totient(m));
        }
    }

    #[test]
    fn tower_valuations() {
        let s = make_family(&FamilyKind::NthRootTower { p: 2, n: 2 }, 3).unwrap();
        let vals: Vec<Val> = (0..3).map(|i| s.element_valuation(i, 2).unwrap()).collect();
        assert_eq!(vals, vec![Val::ratio(1, 2), Val::ratio(3, 4), Val::ratio(7, 8)]);
        assert_eq!(s.elements[2].min_poly(), &p("x^8 - 128"));
        assert_eq!(s.elements[2].certificate(), &Irreducibility::SingleSlope { prime: 2 });
        for i in 0..3 {
            let (cp, integral, divisible) = tower_descent(&s, i).unwrap();
            assert!(integral && divisible);
            let prev = if i == 0 { p("x - 1") } else { s.elements[i - 1].min_poly().clone() };
            assert_eq!(cp, prev.pow(2));
        }
        let check = crosscheck_family(&s, 2, 64).unwrap();
        assert!(check.all_agree, "{check:?}");
        assert_eq!(check.pairs.len(), 3);
    }

    #[test]
    fn two_power_roots_of_unity() {
        let s = make_family(&FamilyKind::RootsOfUnityPPower { p: 2 }, 4).unwrap();
        assert_eq!(s.pair_valuation(1, 2, 2), Some(Val::ratio(1, 4)));
        let check = crosscheck_family(&s, 2, 64).unwrap();
        assert!(check.all_agree);
        let pair = check.pairs.iter().find(|c| c.i == 1 && c.j == 2).unwrap();
        assert_eq!(pair.computed, vec![(Val::ratio(1, 4), 8)]);
        let v = family_verdict(&s, 2).unwrap();
        let r = v.classification.unwrap();
        assert_eq!(r.kind, SequenceKind::PseudoDivergent);
        assert_eq!(r.gauge, vec![Val::ratio(1, 2), Val::ratio(1, 4), Val::ratio(1, 8)]);
        assert_eq!(v.conclusion, Conclusion::Trivial);
        assert_eq!(v.check.status, Status::Pass);
        let at3 = family_verdict(&s, 3).unwrap();
        assert_eq!(at3.classification.unwrap().kind, SequenceKind::PseudoStationary);
        assert!(crosscheck_family(&s, 3, 64).unwrap().all_agree);
    }

    #[test]
    fn prime_order_roots_of_unity() {
        let s = make_family(&FamilyKind::RootsOfUnityPrimes, 3).unwrap();
        let check = crosscheck_family(&s, 7, 64).unwrap();
        assert!(check.all_agree);
        let pair = check.pairs.iter().find(|c| c.i == 1 && c.j == 2).unwrap();
        assert_eq!(pair.computed, vec![(Val::zero(), 8)]);
    }

    #[test]
    fn radicals() {
        let s = make_family(&FamilyKind::PrimeProductRadicals, 4).unwrap();
        assert_eq!(s.elements[3].min_poly(), &p("x^4 - 210"));
        let v5: Vec<Val> = (0..4).map(|i| s.element_valuation(i, 5).unwrap()).collect();
        assert_eq!(v5, vec![Val::zero(), Val::zero(), Val::ratio(1, 3), Val::ratio(1, 4)]);
        for q in [2, 3, 5, 7] {
            assert!(crosscheck_family(&s, q, 64).unwrap().all_agree);
        }
        let six = make_family(&FamilyKind::PrimeProductRadicals, 6).unwrap();
        let v = family_verdict(&six, 3).unwrap();
        assert_eq!(v.tail_start, Some(1));
        assert_eq!(v.classification.unwrap().kind, SequenceKind::PseudoDivergent);
        assert_eq!(v.check.status, Status::Pass);
    }

    #[test]
    fn fcn_family() {
        let s = make_family(&FamilyKind::FcnFamily { c: 2 }, 3).unwrap();
        assert_eq!(s.elements[0].min_poly(), &p("x^3 + 8x^2 + 4"));
        assert_eq!(s.elements[0].certificate(), &Irreducibility::Perron);
        assert_eq!(s.element_valuation(0, 2), Some(Val::ratio(2, 3)));
        assert!(crosscheck_family(&s, 2, 64).unwrap().all_agree);
        assert_eq!(family_verdict(&s, 2).unwrap().check.status, Status::Pass);
        let at3 = family_verdict(&s, 3).unwrap();
        assert_eq!(at3.mechanism, Mechanism::IndexCoprime);
        assert_eq!(at3.check.status, Status::Pass);
        assert!(matches!(make_family(&FamilyKind::FcnFamily { c: 1 }, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn scaled_ring() {
        let s = make_family(&FamilyKind::ScaledRing { d: 2 }, 10).unwrap();
        assert_eq!(s.elements.len(), 10);
        assert!(s.formula_matrix(2).is_none());
        let v = family_verdict(&s, 2).unwrap();
        assert_eq!(v.conclusion, Conclusion::Nontrivial);
        assert_eq!(v.check.status, Status::Pass);
    }

    #[test]
    fn budgets() {
        assert!(matches!(
            make_family(&FamilyKind::RootsOfUnityPPower { p: 2 }, 9),
            Err(Error::BudgetExceeded(_))
        ));
        assert!(make_family(&FamilyKind::RootsOfUnityPPower { p: 2 }, 8).is_ok());
        assert!(matches!(
            make_family(&FamilyKind::NthRootTower { p: 2, n: 3 }, 5),
            Err(Error::BudgetExceeded(_))
        ));
        assert!(matches!(make_family(&FamilyKind::RootsOfUnityPPower { p: 4 }, 2), Err(Error::NotPrime(4))));
    }

    #[test]
    fn kind_json() {
        let k = FamilyKind::NthRootTower { p: 2, n: 2 };
        let s = serde_json::to_string(&k).unwrap();
        assert_eq!(s, r#"{"kind":"nth-root-tower","p":2,"n":2}"#);
        assert_eq!(serde_json::from_str::<FamilyKind>(&s).unwrap(), k);
    }
}
