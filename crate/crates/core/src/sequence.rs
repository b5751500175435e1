//! Finite valuation data for sequences: pseudo-monotone classification, gauge
//! and breadth on prefixes, minimal ball covers and residue classes.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::val::Val;

/// Symmetric matrix of `v(s_i - s_j)` with infinity on the diagonal, checked
/// to satisfy the ultrametric law.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix")]
pub struct ValuationMatrix {
    n: usize,
    entries: Vec<Vec<Val>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct RawMatrix {
    n: usize,
    entries: Vec<Vec<Val>>,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

impl TryFrom<RawMatrix> for ValuationMatrix {
    type Error = Error;

    fn try_from(raw: RawMatrix) -> Result<Self> {
        if raw.entries.len() != raw.n {
            return Err(Error::Parse(format!("n = {} but {} rows given", raw.n, raw.entries.len())));
        }
        ValuationMatrix::new(raw.entries, raw.labels)
    }
}

impl ValuationMatrix {
    pub fn new(entries: Vec<Vec<Val>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = entries.len();
        let bad = |msg: String| Err(Error::Ultrametric(msg));
        if let Some(row) = entries.iter().position(|r| r.len() != n) {
            return bad(format!("row {row} has length {} in a {n}x{n} matrix", entries[row].len()));
        }
        if labels.as_ref().is_some_and(|l| l.len() != n) {
            return Err(Error::Parse("label count differs from n".into()));
        }
        for i in 0..n {
            if !entries[i][i].is_infinite() {
                return bad(format!("diagonal entry ({i},{i}) is {}, expected inf", entries[i][i]));
            }
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return bad(format!("entries ({i},{j}) and ({j},{i}) differ"));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if a == b || b == c || a == c {
                        continue;
                    }
                    let (ab, bc, ac) = (&entries[a][b], &entries[b][c], &entries[a][c]);
                    let lo = ab.min(bc);
                    if ac < lo {
                        return bad(format!("v({a},{c}) = {ac} < min(v({a},{b}), v({b},{c})) = {lo}"));
                    }
                    if ab != bc && ac != lo {
                        return bad(format!("v({a},{c}) = {ac} but v({a},{b}) = {ab} and v({b},{c}) = {bc} differ"));
                    }
                }
            }
        }
        Ok(ValuationMatrix { n, entries, labels })
    }

    /// Builds the matrix from a pairwise function of `i < j`.
    pub fn from_fn(n: usize, mut v: impl FnMut(usize, usize) -> Val) -> Result<Self> {
        let mut entries = vec![vec![Val::Infinity; n]; n];
        for j in 0..n {
            for i in 0..j {
                let x = v(i, j);
                entries[i][j] = x.clone();
                entries[j][i] = x;
            }
        }
        Self::new(entries, None)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Val {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<Val>] {
        &self.entries
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::Parse("label count differs from n".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// The points `idx[0], idx[1], ...` in that order.
    pub fn select(&self, idx: &[usize]) -> Self {
        let entries = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| self.entries[i][j].clone()).collect())
            .collect();
        let labels = self.labels.as_ref().map(|l| idx.iter().map(|&i| l[i].clone()).collect());
        ValuationMatrix { n: idx.len(), entries, labels }
    }

    pub fn prefix(&self, len: usize) -> Self {
        self.select(&(0..len.min(self.n)).collect::<Vec<_>>())
    }

    pub fn reversed(&self) -> Self {
        self.select(&(0..self.n).rev().collect::<Vec<_>>())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SequenceKind {
    PseudoConvergent,
    PseudoDivergent,
    PseudoStationary,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BreadthHint {
    WholeRing,
    MaximalIdeal,
    ProperBall(Val),
    Fractional,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub kind: SequenceKind,
    pub gauge: Vec<Val>,
    pub breadth: Option<Val>,
    pub breadth_ideal_hint: Option<BreadthHint>,
    pub prefix_len: usize,
    pub note: String,
}

fn all_triples(n: usize, mut ok: impl FnMut(usize, usize, usize) -> bool) -> bool {
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if !ok(i, j, k) {
                    return false;
                }
            }
        }
    }
    true
}

fn hint_for(kind: SequenceKind, breadth: &Val) -> BreadthHint {
    let zero = Val::zero();
    match kind {
        SequenceKind::PseudoStationary => {
            if *breadth == zero {
                BreadthHint::WholeRing
            } else if *breadth > zero {
                BreadthHint::ProperBall(breadth.clone())
            } else {
                BreadthHint::Fractional
            }
        }
        SequenceKind::PseudoDivergent => {
            if *breadth >= zero {
                BreadthHint::MaximalIdeal
            } else {
                BreadthHint::Fractional
            }
        }
        SequenceKind::PseudoConvergent => {
            if *breadth >= zero {
                BreadthHint::ProperBall(breadth.clone())
            } else {
                BreadthHint::Fractional
            }
        }
        SequenceKind::None => unreachable!("no breadth without a verdict"),
    }
}

/// Checks the three pseudo-monotone patterns in the given index order.
pub fn classify_prefix(m: &ValuationMatrix) -> ClassificationReport {
    let n = m.n;
    let none = |note: String| ClassificationReport {
        kind: SequenceKind::None,
        gauge: Vec::new(),
        breadth: None,
        breadth_ideal_hint: None,
        prefix_len: n,
        note,
    };
    if n < 3 {
        return none(format!("insufficient: {n} points, need at least 3"));
    }
    let v = |i: usize, j: usize| &m.entries[i][j];
    let (kind, gauge) = if all_triples(n, |i, j, k| v(i, j) == v(j, k) && v(i, j) == v(i, k)) {
        (SequenceKind::PseudoStationary, vec![v(0, 1).clone()])
    } else if all_triples(n, |i, j, k| v(i, j) < v(j, k)) {
        (SequenceKind::PseudoConvergent, (0..n - 1).map(|i| v(i, i + 1).clone()).collect())
    } else if all_triples(n, |i, j, k| v(i, j) > v(j, k)) {
        (SequenceKind::PseudoDivergent, (1..n).map(|i| v(i - 1, i).clone()).collect())
    } else {
        return none("mixed: none of the three patterns holds on this prefix".into());
    };
    let breadth = gauge.last().cloned().expect("nonempty gauge");
    let mut note = format!("prefix-certified, length {n}");
    if kind == SequenceKind::PseudoStationary {
        note.push_str("; constant so far, eventual behaviour undetermined");
    }
    ClassificationReport {
        kind,
        breadth_ideal_hint: Some(hint_for(kind, &breadth)),
        breadth: Some(breadth),
        gauge,
        prefix_len: n,
        note,
    }
}

/// Largest matrix size accepted by the brute-force [`ball_cover`].
pub const BALL_COVER_LIMIT: usize = 20;

fn combinations(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if visit(&idx) {
            return;
        }
        let Some(pos) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[pos] += 1;
        for i in pos + 1..k {
            idx[i] = idx[i - 1] + 1;
        }
    }
}

/// Smallest `T` (lexicographically first among minimum size) with every point
/// within valuation `delta` of some member of `T`.
pub fn ball_cover(m: &ValuationMatrix, delta: &Val) -> Result<Vec<usize>> {
    if !delta.is_positive() {
        return Err(Error::Domain(format!("ball radius must be positive, got {delta}")));
    }
    if m.n > BALL_COVER_LIMIT {
        return Err(Error::BudgetExceeded(format!("ball cover brute force limited to {BALL_COVER_LIMIT} points")));
    }
    for k in 1..=m.n {
        let mut found = None;
        combinations(m.n, k, |t| {
            let covers = (0..m.n).all(|s| t.iter().any(|&c| m.entries[s][c] >= *delta));
            if covers {
                found = Some(t.to_vec());
            }
            covers
        });
        if let Some(t) = found {
            return Ok(t);
        }
    }
    Ok(Vec::new())
}

/// Classes of the relation `v(s_i - s_j) >= gamma`, each sorted, ordered by
/// smallest member.
pub fn residue_classes(m: &ValuationMatrix, gamma: &Val) -> Result<Vec<Vec<usize>>> {
    if !gamma.is_positive() {
        return Err(Error::Domain(format!("gamma must be positive, got {gamma}")));
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..m.n {
        match classes.iter_mut().find(|c| m.entries[c[0]][i] >= *gamma) {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }
    Ok(classes)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridPoint {
    pub gamma: Val,
    pub cover_size: usize,
    pub class_count: usize,
    pub agree: bool,
}

/// Inside one ball of radius `gamma`, a pseudo-divergent or pseudo-stationary
/// run of points must have its gauge at or above `gamma`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContainmentCheck {
    pub gamma: Val,
    pub members: Vec<usize>,
    pub kind: SequenceKind,
    pub min_gauge: Val,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverCrossCheck {
    pub grid: Vec<GridPoint>,
    pub containment: Vec<ContainmentCheck>,
    pub all_ok: bool,
}

/// Radii drawn from the matrix: every distinct positive finite entry, the
/// midpoints between consecutive ones, half the smallest, and one more than
/// the largest. `{1}` when there are no positive entries.
pub fn gamma_grid(m: &ValuationMatrix) -> Vec<Val> {
    let mut vals: Vec<Val> = m
        .entries
        .iter()
        .flatten()
        .filter(|v| !v.is_infinite() && v.is_positive())
        .cloned()
        .collect();
    vals.sort();
    vals.dedup();
    if vals.is_empty() {
        return vec![Val::int(1)];
    }
    let q = |v: &Val| v.finite().expect("finite").clone();
    let two = num_rational::BigRational::from_integer(2.into());
    let mut grid = vec![Val::Finite(q(&vals[0]) / &two)];
    for w in vals.windows(2) {
        grid.push(w[0].clone());
        grid.push(Val::Finite((q(&w[0]) + q(&w[1])) / &two));
    }
    let last = vals.last().expect("nonempty").clone();
    grid.push(Val::Finite(q(&last) + num_rational::BigRational::from_integer(1.into())));
    grid.push(last);
    grid.sort();
    grid
}

/// Checks `|minimal ball cover| = |residue classes|` at every grid radius and
/// the breadth bound for runs that stay inside one ball.
pub fn cover_class_crosscheck(m: &ValuationMatrix) -> Result<CoverCrossCheck> {
    let mut grid = Vec::new();
    let mut containment = Vec::new();
    for gamma in gamma_grid(m) {
        let cover = ball_cover(m, &gamma)?;
        let classes = residue_classes(m, &gamma)?;
        grid.push(GridPoint {
            gamma: gamma.clone(),
            cover_size: cover.len(),
            class_count: classes.len(),
            agree: cover.len() == classes.len(),
        });
        for members in classes.into_iter().filter(|c| c.len() >= 3) {
            let report = classify_prefix(&m.select(&members));
            if matches!(report.kind, SequenceKind::PseudoDivergent | SequenceKind::PseudoStationary) {
                let min_gauge = report.gauge.iter().min().expect("nonempty").clone();
                containment.push(ContainmentCheck {
                    gamma: gamma.clone(),
                    holds: min_gauge >= gamma,
                    members,
                    kind: report.kind,
                    min_gauge,
                });
            }
        }
    }
    let all_ok = grid.iter().all(|g| g.agree) && containment.iter().all(|c| c.holds);
    Ok(CoverCrossCheck { grid, containment, all_ok })
}

/// Heuristic scan for a long pseudo-divergent subsequence: keeps each index
/// that extends the current run without breaking the pattern.
pub fn greedy_divergent_subsequence(m: &ValuationMatrix) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for k in 0..m.n {
        let ok = chosen.iter().enumerate().all(|(a, &i)| {
            chosen[a + 1..].iter().all(|&j| m.entries[i][j] > m.entries[j][k])
        });
        if ok {
            chosen.push(k);
        }
    }
    chosen
}

/// Ultrametric matrix from a random binary merge tree; merge heights are
/// multiples of 1/4 in `[0, 3]` and never exceed those of the merged clusters.
pub fn random_tree_ultrametric(n: usize, rng: &mut impl Rng) -> ValuationMatrix {
    let mut entries = vec![vec![Val::Infinity; n]; n];
    let mut clusters: Vec<(Vec<usize>, Val)> = (0..n).map(|i| (vec![i], Val::Infinity)).collect();
    while clusters.len() > 1 {
        let a = rng.gen_range(0..clusters.len());
        let (ma, ha) = clusters.swap_remove(a);
        let b = rng.gen_range(0..clusters.len());
        let (mb, hb) = clusters.swap_remove(b);
        let h = Val::ratio(rng.gen_range(0..=12), 4).min(ha.clone()).min(hb.clone());
        for &i in &ma {
            for &j in &mb {
                entries[i][j] = h.clone();
                entries[j][i] = h.clone();
            }
        }
        let mut merged = ma;
        merged.extend(mb);
        clusters.push((merged, h));
    }
    ValuationMatrix::new(entries, None).expect("tree construction is ultrametric")
}
