//! Truncated quasi-symmetric series attached to initial sections: the
//! fundamental basis, the column-strict series built from semi-standard
//! labelings of peeling sequences, the classical and affine Stanley
//! symmetric function oracles they must match, and the word/weight
//! decomposition behind that equality in the staircase case.
//!
//! Everything is truncated to `m` variables. All series produced here are
//! homogeneous, so truncation loses nothing below degree `m + 1`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::digraph::{InitialSection, ValuedDigraph, VertexId, VertexSet};
use crate::posets::FinitePoset;
use crate::weak_a::{Permutation, StaircaseBox, StaircaseDigraph};
use crate::weak_affine::{AffinePermutation, CylinderDigraph};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum QuasisymError {
    #[error("enumeration exceeded the cap of {cap} functions")]
    CapExceeded { cap: usize },
    #[error("function is not semi-standard for the given columns")]
    NotSemiStandard,
    #[error("word and weights do not form a valid decomposition")]
    InvalidDecomposition,
}

/// Polynomial in variables `x1..xm` with exact integer coefficients,
/// printed in graded lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedPolynomial {
    m: u32,
    terms: BTreeMap<Vec<u32>, i64>,
}

#[derive(Serialize)]
pub struct PolynomialTerm {
    pub exps: Vec<u32>,
    pub coef: i64,
}

#[derive(Serialize)]
pub struct PolynomialDump {
    pub m: u32,
    pub terms: Vec<PolynomialTerm>,
}

impl TruncatedPolynomial {
    pub fn zero(m: u32) -> Self {
        assert!(m >= 1);
        TruncatedPolynomial {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(m: u32) -> Self {
        let mut p = TruncatedPolynomial::zero(m);
        p.add_term(&vec![0; m as usize], 1);
        p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: &[u32], coef: i64) {
        assert_eq!(exps.len(), self.m as usize);
        let entry = self.terms.entry(exps.to_vec()).or_insert(0);
        *entry += coef;
        if *entry == 0 {
            self.terms.remove(exps);
        }
    }

    pub fn coefficient(&self, exps: &[u32]) -> i64 {
        self.terms.get(exps).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, i64)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    /// Coefficient of `x1*x2*...*xd` where `d` is the degree of the series.
    pub fn square_free_coefficient(&self, degree: u32) -> i64 {
        assert!(degree <= self.m);
        let mut exps = vec![0; self.m as usize];
        for e in exps.iter_mut().take(degree as usize) {
            *e = 1;
        }
        self.coefficient(&exps)
    }

    fn sorted_terms(&self) -> Vec<(&Vec<u32>, i64)> {
        let mut ts: Vec<(&Vec<u32>, i64)> = self.terms().collect();
        ts.sort_by(|(a, _), (b, _)| {
            let (da, db) = (a.iter().sum::<u32>(), b.iter().sum::<u32>());
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        ts
    }

    pub fn dump(&self) -> PolynomialDump {
        PolynomialDump {
            m: self.m,
            terms: self
                .sorted_terms()
                .into_iter()
                .map(|(e, c)| PolynomialTerm {
                    exps: e.clone(),
                    coef: c,
                })
                .collect(),
        }
    }

    /// Coefficients are stable under swapping adjacent variables whenever a
    /// monomial does not use both of them.
    pub fn is_quasi_symmetric(&self) -> bool {
        self.swaps_preserved(false)
    }

    /// Coefficients are stable under every adjacent variable swap.
    pub fn is_symmetric(&self) -> bool {
        self.swaps_preserved(true)
    }

    fn swaps_preserved(&self, everywhere: bool) -> bool {
        self.terms().all(|(exps, coef)| {
            (0..self.m as usize - 1).all(|i| {
                if !everywhere && exps[i] > 0 && exps[i + 1] > 0 {
                    return true;
                }
                let mut swapped = exps.clone();
                swapped.swap(i, i + 1);
                self.coefficient(&swapped) == coef
            })
        })
    }
}

impl fmt::Display for TruncatedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (exps, coef)) in self.sorted_terms().into_iter().enumerate() {
            if idx == 0 {
                if coef < 0 {
                    write!(f, "-")?;
                }
            } else if coef < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = coef.unsigned_abs();
            let mut wrote = false;
            if mag != 1 || exps.iter().all(|&e| e == 0) {
                write!(f, "{mag}")?;
                wrote = true;
            }
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if wrote {
                    write!(f, "*")?;
                }
                write!(f, "x{}", i + 1)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
                wrote = true;
            }
        }
        Ok(())
    }
}

/// Fundamental quasi-symmetric polynomial of degree `n` in `m` variables:
/// weakly increasing sequences with strict rises at the given positions
/// (1-based gaps).
pub fn fundamental(strict: &BTreeSet<usize>, n: u32, m: u32) -> TruncatedPolynomial {
    assert!(m >= 1);
    let mut out = TruncatedPolynomial::zero(m);
    let mut exps = vec![0u32; m as usize];
    fn rec(
        j: u32,
        n: u32,
        last: u32,
        strict: &BTreeSet<usize>,
        exps: &mut Vec<u32>,
        out: &mut TruncatedPolynomial,
    ) {
        if j > n {
            out.add_term(exps, 1);
            return;
        }
        let lo = if j > 1 && strict.contains(&(j as usize - 1)) {
            last + 1
        } else {
            last
        };
        for v in lo.max(1)..=out.m() {
            exps[v as usize - 1] += 1;
            rec(j + 1, n, v, strict, exps, out);
            exps[v as usize - 1] -= 1;
        }
    }
    rec(1, n, 1, strict, &mut exps, &mut out);
    out
}

/// One vertex set per vertex; labels appearing in a set force strictly
/// increasing values across the members peeled later.
#[derive(Debug, Clone)]
pub struct GeneralizedColumns {
    sets: Vec<VertexSet>,
}

impl GeneralizedColumns {
    pub fn new(sets: Vec<VertexSet>) -> Self {
        GeneralizedColumns { sets }
    }

    pub fn set(&self, v: VertexId) -> &VertexSet {
        &self.sets[v.index()]
    }
}

/// Column family of the staircase: each box constrains its whole column.
pub fn columns_a(d: &StaircaseDigraph) -> GeneralizedColumns {
    let sets = d
        .boxes()
        .iter()
        .map(|bx| {
            ((bx.a + 1)..=d.n())
                .map(|k| d.vertex(StaircaseBox { a: bx.a, b: k }))
                .collect()
        })
        .collect();
    GeneralizedColumns::new(sets)
}

/// Column family of the cylinder window, skipping the forbidden residue.
pub fn columns_affine(d: &CylinderDigraph) -> GeneralizedColumns {
    let nn = d.n() as i64;
    let sets = d
        .boxes()
        .iter()
        .map(|&(a, _)| {
            ((a + 1)..=(a + d.depth() as i64 * nn))
                .filter(|&k| (k - a).rem_euclid(nn) != 0)
                .map(|k| d.vertex(a, k))
                .collect()
        })
        .collect();
    GeneralizedColumns::new(sets)
}

/// Column family induced by a poset labeling: the set of a vertex holds
/// every vertex with a smaller label.
pub fn columns_of_labeling(p: &FinitePoset, labeling: &[u32]) -> GeneralizedColumns {
    assert_eq!(labeling.len(), p.n() as usize);
    let sets = (0..p.n())
        .map(|z| {
            (0..p.n())
                .filter(|&y| labeling[z as usize] > labeling[y as usize])
                .map(VertexId)
                .collect()
        })
        .collect();
    GeneralizedColumns::new(sets)
}

/// Values on the members of an initial section, admitting at least one
/// compatible peeling sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SemiStandardFunction {
    values: BTreeMap<VertexId, u32>,
}

impl SemiStandardFunction {
    pub fn new(values: BTreeMap<VertexId, u32>) -> Self {
        SemiStandardFunction { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, v: VertexId) -> u32 {
        self.values[&v]
    }

    pub fn values(&self) -> &BTreeMap<VertexId, u32> {
        &self.values
    }

    pub fn monomial(&self, m: u32) -> Vec<u32> {
        let mut exps = vec![0u32; m as usize];
        for &v in self.values.values() {
            exps[v as usize - 1] += 1;
        }
        exps
    }
}

struct SsfSearch<'a> {
    work: ValuedDigraph,
    columns: &'a GeneralizedColumns,
    m: u32,
    remaining: BTreeSet<VertexId>,
    stack: Vec<(VertexId, u32)>,
    found: BTreeSet<Vec<(VertexId, u32)>>,
    cap: Option<usize>,
}

impl SsfSearch<'_> {
    fn run(&mut self) -> Result<(), QuasisymError> {
        if self.remaining.is_empty() {
            let mut f = self.stack.clone();
            f.sort();
            self.found.insert(f);
            if let Some(cap) = self.cap {
                if self.found.len() > cap {
                    return Err(QuasisymError::CapExceeded { cap });
                }
            }
            return Ok(());
        }
        let candidates: Vec<VertexId> = self
            .remaining
            .iter()
            .copied()
            .filter(|&z| self.work.is_erasable(z))
            .collect();
        for z in candidates {
            let mut lo = self.stack.last().map_or(1, |&(_, v)| v);
            for &(zi, vi) in &self.stack {
                if self.columns.set(zi).contains(z) {
                    lo = lo.max(vi + 1);
                }
            }
            for v in lo..=self.m {
                self.stack.push((z, v));
                self.work.peel_in_place(z);
                self.remaining.remove(&z);
                let r = self.run();
                self.remaining.insert(z);
                self.work.unpeel_in_place(z);
                self.stack.pop();
                r?;
            }
        }
        Ok(())
    }
}

fn enumerate_ssf(
    g: &ValuedDigraph,
    a: &InitialSection,
    columns: &GeneralizedColumns,
    m: u32,
    cap: Option<usize>,
) -> Result<Vec<SemiStandardFunction>, QuasisymError> {
    assert!(m >= 1);
    let mut search = SsfSearch {
        work: g.clone(),
        columns,
        m,
        remaining: a.iter().collect(),
        stack: Vec::new(),
        found: BTreeSet::new(),
        cap,
    };
    search.run()?;
    Ok(search
        .found
        .into_iter()
        .map(|f| SemiStandardFunction::new(f.into_iter().collect()))
        .collect())
}

/// All semi-standard functions on the section with values in `[1, m]`.
pub fn semi_standard_functions(
    g: &ValuedDigraph,
    a: &InitialSection,
    columns: &GeneralizedColumns,
    m: u32,
) -> Vec<SemiStandardFunction> {
    enumerate_ssf(g, a, columns, m, None).expect("uncapped enumeration cannot overflow")
}

/// True when some peeling sequence of the section is weakly increasing
/// under `f` and strictly increasing into each listed column set.
pub fn is_semi_standard(
    g: &ValuedDigraph,
    a: &InitialSection,
    columns: &GeneralizedColumns,
    f: &SemiStandardFunction,
) -> bool {
    if f.values().len() != a.len() || a.iter().any(|v| !f.values().contains_key(&v)) {
        return false;
    }
    fn rec(
        work: &mut ValuedDigraph,
        remaining: &mut BTreeSet<VertexId>,
        peeled: &mut Vec<VertexId>,
        columns: &GeneralizedColumns,
        f: &SemiStandardFunction,
        last: u32,
    ) -> bool {
        if remaining.is_empty() {
            return true;
        }
        if remaining.iter().any(|&z| f.value(z) < last) {
            return false;
        }
        let candidates: Vec<VertexId> = remaining
            .iter()
            .copied()
            .filter(|&z| {
                work.is_erasable(z)
                    && f.value(z) >= last
                    && peeled
                        .iter()
                        .all(|&zi| !columns.set(zi).contains(z) || f.value(zi) < f.value(z))
            })
            .collect();
        for z in candidates {
            work.peel_in_place(z);
            remaining.remove(&z);
            peeled.push(z);
            let ok = rec(work, remaining, peeled, columns, f, f.value(z));
            peeled.pop();
            remaining.insert(z);
            work.unpeel_in_place(z);
            if ok {
                return true;
            }
        }
        false
    }
    let mut work = g.clone();
    let mut remaining: BTreeSet<VertexId> = a.iter().collect();
    rec(&mut work, &mut remaining, &mut Vec::new(), columns, f, 1)
}

/// Series of the section for the given columns: one monomial per
/// semi-standard function with values in `[1, m]`.
pub fn gamma(
    g: &ValuedDigraph,
    a: &InitialSection,
    columns: &GeneralizedColumns,
    m: u32,
    cap: Option<usize>,
) -> Result<TruncatedPolynomial, QuasisymError> {
    let mut out = TruncatedPolynomial::zero(m);
    for f in enumerate_ssf(g, a, columns, m, cap)? {
        out.add_term(&f.monomial(m), 1);
    }
    Ok(out)
}

/// Series of a labeled poset, summed over descent sets of its linear
/// extensions. Agrees with `gamma` on the down-set digraph under
/// `columns_of_labeling`.
pub fn p_partition_series(p: &FinitePoset, labeling: &[u32], m: u32) -> TruncatedPolynomial {
    let n = p.n();
    assert_eq!(labeling.len(), n as usize);
    {
        let mut sorted: Vec<u32> = labeling.to_vec();
        sorted.sort_unstable();
        assert!(
            sorted.into_iter().eq(1..=n),
            "labeling must be a bijection to [n]"
        );
    }
    let mut out = TruncatedPolynomial::zero(m);
    for ext in p.linear_extensions() {
        let descents: BTreeSet<usize> = (1..n as usize)
            .filter(|&j| labeling[ext[j - 1].index()] > labeling[ext[j].index()])
            .collect();
        let g = fundamental(&descents, n, m);
        for (e, c) in g.terms() {
            out.add_term(e, c);
        }
    }
    #[cfg(debug_assertions)]
    {
        let g = p.downset_digraph();
        let full =
            InitialSection::new(&g, g.vertices().collect()).expect("ground set is a lower set");
        let via_columns = gamma(&g, &full, &columns_of_labeling(p, labeling), m, None).unwrap();
        debug_assert_eq!(out, via_columns);
    }
    out
}

/// All reduced words, built from right descents.
pub fn reduced_words(p: &Permutation) -> Vec<Vec<u32>> {
    if p.inversion_count() == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 1..p.n() {
        if p.value(i) > p.value(i + 1) {
            for mut w in reduced_words(&p.swap_positions(i)) {
                w.push(i);
                out.push(w);
            }
        }
    }
    out
}

/// All reduced words of an affine permutation.
pub fn affine_reduced_words(p: &AffinePermutation) -> Vec<Vec<u32>> {
    let descents: Vec<u32> = (1..=p.n()).filter(|&s| !p.lengthens(s)).collect();
    if descents.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for s in descents {
        for mut w in affine_reduced_words(&p.apply_generator(s)) {
            w.push(s);
            out.push(w);
        }
    }
    out
}

/// Stanley symmetric function, truncated: one fundamental polynomial per
/// reduced word, with strict rises where the word ascends.
pub fn stanley(p: &Permutation, m: u32) -> TruncatedPolynomial {
    let mut out = TruncatedPolynomial::zero(m);
    for word in reduced_words(p) {
        let strict: BTreeSet<usize> = (1..word.len()).filter(|&j| word[j - 1] < word[j]).collect();
        for (e, c) in fundamental(&strict, word.len() as u32, m).terms() {
            out.add_term(e, c);
        }
    }
    out
}

/// The cyclically decreasing elements: one per proper subset of the
/// generator indices, the product of its decreasing cyclic runs.
pub fn cyclically_decreasing_elements(n: u32) -> Vec<AffinePermutation> {
    assert!(n >= 2);
    let mut out = Vec::new();
    for mask in 0..((1u32 << n) - 1) {
        let has = |s: u32| mask & (1 << (s - 1)) != 0;
        let pred = |s: u32| if s == 1 { n } else { s - 1 };
        let succ = |s: u32| if s == n { 1 } else { s + 1 };
        let mut p = AffinePermutation::identity(n);
        let mut used = 0u32;
        for start in 1..=n {
            if has(start) && !has(pred(start)) {
                let mut run = vec![start];
                while has(succ(*run.last().unwrap())) {
                    run.push(succ(*run.last().unwrap()));
                }
                for &s in run.iter().rev() {
                    p = p.apply_generator(s);
                    used += 1;
                }
            }
        }
        debug_assert_eq!(used, mask.count_ones());
        debug_assert_eq!(p.length(), mask.count_ones() as usize);
        out.push(p);
    }
    out
}

/// Affine Stanley series, truncated: one monomial per factorization into
/// exactly `m` cyclically decreasing factors (identity factors allowed)
/// with additive lengths.
pub fn affine_stanley(p: &AffinePermutation, m: u32) -> TruncatedPolynomial {
    let factors = cyclically_decreasing_elements(p.n());
    let mut out = TruncatedPolynomial::zero(m);
    let mut exps = vec![0u32; m as usize];
    fn rec(
        remaining: &AffinePermutation,
        left: u32,
        factors: &[AffinePermutation],
        exps: &mut Vec<u32>,
        out: &mut TruncatedPolynomial,
    ) {
        let l = remaining.length();
        if left == 0 {
            if l == 0 {
                out.add_term(exps, 1);
            }
            return;
        }
        if l > left as usize * (remaining.n() as usize - 1) {
            return;
        }
        let slot = exps.len() - left as usize;
        for v in factors {
            let lv = v.length();
            if lv > l {
                continue;
            }
            let rest = v.inverse().multiply(remaining);
            if rest.length() == l - lv {
                exps[slot] = lv as u32;
                rec(&rest, left - 1, factors, exps, out);
                exps[slot] = 0;
            }
        }
    }
    rec(p, m, &factors, &mut exps, &mut out);
    out
}

/// Cell carrying the maximal value; ties broken by the position of the
/// column index in the window, smallest first. `None` on the empty
/// function.
pub fn leading_cell(
    f: &SemiStandardFunction,
    d: &StaircaseDigraph,
    p: &Permutation,
) -> Option<StaircaseBox> {
    f.values()
        .iter()
        .map(|(&v, &val)| (d.box_of(v), val))
        .max_by_key(|&(bx, val)| (val, std::cmp::Reverse(p.position(bx.a))))
        .map(|(bx, _)| bx)
}

/// Decomposes a semi-standard function on an inversion set into a reduced
/// word and its weakly increasing weight sequence by repeatedly removing
/// the leading cell.
pub fn to_word_and_weights(
    f: &SemiStandardFunction,
    d: &StaircaseDigraph,
    p: &Permutation,
) -> (Vec<u32>, Vec<u32>) {
    let mut word = vec![0u32; f.len()];
    let mut weights = vec![0u32; f.len()];
    let mut current = p.clone();
    let mut rest = f.clone();
    for j in (0..f.len()).rev() {
        let bx = leading_cell(&rest, d, &current).expect("nonempty remainder");
        let i = current.position(bx.b);
        debug_assert_eq!(current.position(bx.a), i + 1, "leading cell is adjacent");
        word[j] = i;
        weights[j] = rest.value(d.vertex(bx));
        current = current.swap_positions(i);
        let mut vals = rest.values().clone();
        vals.remove(&d.vertex(bx));
        rest = SemiStandardFunction::new(vals);
    }
    (word, weights)
}

/// Inverse of `to_word_and_weights`: walks the word forward, recording the
/// weight on each inversion as it appears.
pub fn from_word_and_weights(
    n: u32,
    word: &[u32],
    weights: &[u32],
) -> Result<(Permutation, SemiStandardFunction), QuasisymError> {
    if word.len() != weights.len() {
        return Err(QuasisymError::InvalidDecomposition);
    }
    let d = StaircaseDigraph::new(n);
    let mut current = Permutation::identity(n);
    let mut values = BTreeMap::new();
    for (j, (&i, &r)) in word.iter().zip(weights).enumerate() {
        if i == 0 || i >= n || !current.has_ascent(i) {
            return Err(QuasisymError::InvalidDecomposition);
        }
        if j > 0 && (r < weights[j - 1] || (word[j - 1] < i && r == weights[j - 1])) {
            return Err(QuasisymError::InvalidDecomposition);
        }
        let bx = StaircaseBox {
            a: current.value(i),
            b: current.value(i + 1),
        };
        values.insert(d.vertex(bx), r);
        current = current.swap_positions(i);
    }
    Ok((current, SemiStandardFunction::new(values)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice;
    use crate::weak_a;
    use crate::weak_affine::{self, sufficient_depth};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Reduced word read off a peeling sequence of an affine inversion
    /// set: one generator per peeled box, at the box's current position.
    fn affine_word_along(d: &CylinderDigraph, seq: &[VertexId]) -> Vec<u32> {
        let nn = d.n() as i64;
        let mut p = AffinePermutation::identity(d.n());
        let mut word = Vec::with_capacity(seq.len());
        for &v in seq {
            let (a, b) = d.box_of(v);
            let pa = p.position(a);
            assert_eq!(p.position(b), pa + 1);
            let s = (pa - 1).rem_euclid(nn) as u32 + 1;
            word.push(s);
            p = p.apply_generator(s);
        }
        word
    }

    /// Factorization of an affine element from one compatible peeling
    /// sequence: the letters of each value block multiply into one factor.
    fn affine_factorization_along(
        d: &CylinderDigraph,
        f: &SemiStandardFunction,
        seq: &[VertexId],
        m: u32,
    ) -> Vec<AffinePermutation> {
        let word = affine_word_along(d, seq);
        let mut factors = vec![AffinePermutation::identity(d.n()); m as usize];
        for (j, &v) in seq.iter().enumerate() {
            let k = f.value(v) as usize - 1;
            factors[k] = factors[k].apply_generator(word[j]);
        }
        factors
    }

    fn poly(m: u32, terms: &[(&[u32], i64)]) -> TruncatedPolynomial {
        let mut p = TruncatedPolynomial::zero(m);
        for &(e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    #[test]
    fn fundamental_examples() {
        assert_eq!(
            fundamental(&BTreeSet::new(), 2, 2),
            poly(2, &[(&[2, 0], 1), (&[1, 1], 1), (&[0, 2], 1)])
        );
        let full: BTreeSet<usize> = (1..4).collect();
        assert_eq!(fundamental(&full, 4, 4).dump().terms.len(), 1);
        assert_eq!(fundamental(&full, 4, 4).coefficient(&[1, 1, 1, 1]), 1);
        assert_eq!(
            fundamental(&BTreeSet::from([1]), 3, 2),
            poly(2, &[(&[1, 2], 1)])
        );
    }

    #[test]
    fn display_is_graded_lexicographic() {
        let p = poly(2, &[(&[1, 2], 1), (&[2, 1], 1)]);
        assert_eq!(p.to_string(), "x1^2*x2 + x1*x2^2");
        assert_eq!(TruncatedPolynomial::one(3).to_string(), "1");
        assert_eq!(TruncatedPolynomial::zero(2).to_string(), "0");
        assert_eq!(
            poly(2, &[(&[1, 0], 2), (&[0, 0], 1)]).to_string(),
            "1 + 2*x1"
        );
        assert_eq!(poly(2, &[(&[3, 0], -1)]).to_string(), "-x1^3");
    }

    #[test]
    fn gamma_on_staircase_examples() {
        let d = StaircaseDigraph::new(3);
        let cols = columns_a(&d);
        let empty = InitialSection::empty();
        assert_eq!(
            gamma(d.graph(), &empty, &cols, 2, None)
                .unwrap()
                .to_string(),
            "1"
        );

        let w0 = Permutation::from_window(vec![3, 2, 1]).unwrap();
        let full = d.section_of(&w0);
        let g = gamma(d.graph(), &full, &cols, 2, None).unwrap();
        assert_eq!(g.to_string(), "x1^2*x2 + x1*x2^2");
    }

    #[test]
    fn square_free_coefficient_counts_chains() {
        let d = StaircaseDigraph::new(4);
        let cols = columns_a(&d);
        for window in [vec![4, 3, 2, 1], vec![2, 4, 1, 3], vec![3, 1, 4, 2]] {
            let p = Permutation::from_window(window).unwrap();
            let s = d.section_of(&p);
            let l = p.inversion_count() as u32;
            let g = gamma(d.graph(), &s, &cols, l.max(1), None).unwrap();
            let chains = lattice::maximal_chain_count(d.graph(), &s);
            assert_eq!(
                g.square_free_coefficient(l),
                chains.to_string().parse::<i64>().unwrap()
            );
        }
    }

    #[test]
    fn gamma_cap_is_enforced() {
        let d = StaircaseDigraph::new(3);
        let cols = columns_a(&d);
        let w0 = Permutation::from_window(vec![3, 2, 1]).unwrap();
        let full = d.section_of(&w0);
        assert!(matches!(
            gamma(d.graph(), &full, &cols, 3, Some(1)),
            Err(QuasisymError::CapExceeded { cap: 1 })
        ));
    }

    #[test]
    fn fast_enumeration_matches_all_functions_oracle() {
        let d = StaircaseDigraph::new(3);
        let cols = columns_a(&d);
        let lat = lattice::build(d.graph(), &lattice::BuildOptions::default()).unwrap();
        for a in lat.elements() {
            for m in 1..=3u32 {
                let fast: BTreeSet<SemiStandardFunction> =
                    semi_standard_functions(d.graph(), a, &cols, m)
                        .into_iter()
                        .collect();
                let members: Vec<VertexId> = a.iter().collect();
                let mut slow = BTreeSet::new();
                let total = (m as usize).pow(members.len() as u32);
                for code in 0..total {
                    let mut c = code;
                    let mut values = BTreeMap::new();
                    for &v in &members {
                        values.insert(v, (c % m as usize) as u32 + 1);
                        c /= m as usize;
                    }
                    let f = SemiStandardFunction::new(values);
                    if is_semi_standard(d.graph(), a, &cols, &f) {
                        slow.insert(f);
                    }
                }
                assert_eq!(fast, slow, "section {} m={m}", a.members());
            }
        }
    }

    #[test]
    fn p_partition_examples() {
        let single = FinitePoset::antichain(1);
        assert_eq!(
            p_partition_series(&single, &[1], 3),
            poly(3, &[(&[1, 0, 0], 1), (&[0, 1, 0], 1), (&[0, 0, 1], 1)])
        );

        let anti = FinitePoset::antichain(2);
        let mut expected = fundamental(&BTreeSet::new(), 2, 3);
        for (e, c) in fundamental(&BTreeSet::from([1]), 2, 3).terms() {
            expected.add_term(e, c);
        }
        assert_eq!(p_partition_series(&anti, &[1, 2], 3), expected);

        let chain = FinitePoset::from_relations(2, &[(0, 1)]).unwrap();
        assert_eq!(
            p_partition_series(&chain, &[2, 1], 3),
            fundamental(&BTreeSet::from([1]), 2, 3)
        );
    }

    #[test]
    fn p_partition_routes_agree_on_random_posets() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10 {
            let n = rng.gen_range(1..=5);
            let p = crate::posets::random_poset(&mut rng, n, 0.4);
            let mut labeling: Vec<u32> = (1..=n).collect();
            for i in (1..labeling.len()).rev() {
                labeling.swap(i, rng.gen_range(0..=i));
            }
            let series = p_partition_series(&p, &labeling, 3);
            let g = p.downset_digraph();
            let full = InitialSection::new(&g, g.vertices().collect()).unwrap();
            let via = gamma(&g, &full, &columns_of_labeling(&p, &labeling), 3, None).unwrap();
            assert_eq!(series, via);
            assert!(series.is_quasi_symmetric());
        }
    }

    #[test]
    fn reduced_word_examples() {
        assert_eq!(
            reduced_words(&Permutation::identity(3)),
            vec![Vec::<u32>::new()]
        );
        let w0 = Permutation::from_window(vec![3, 2, 1]).unwrap();
        let words: BTreeSet<Vec<u32>> = reduced_words(&w0).into_iter().collect();
        assert_eq!(words, BTreeSet::from([vec![1, 2, 1], vec![2, 1, 2]]));
        let w0 = Permutation::from_window(vec![4, 3, 2, 1]).unwrap();
        assert_eq!(reduced_words(&w0).len(), 16);
    }

    #[test]
    fn reduced_word_count_is_chain_count() {
        let d = StaircaseDigraph::new(4);
        for w in weak_a::weak_order(4, None).elements {
            let p = Permutation::from_window(w).unwrap();
            let s = d.section_of(&p);
            let chains = lattice::maximal_chain_count(d.graph(), &s);
            assert_eq!(chains.to_string(), reduced_words(&p).len().to_string());
        }
    }

    #[test]
    fn stanley_examples() {
        assert_eq!(stanley(&Permutation::identity(3), 2).to_string(), "1");
        let s1 = Permutation::from_window(vec![2, 1, 3]).unwrap();
        assert_eq!(
            stanley(&s1, 3),
            poly(3, &[(&[1, 0, 0], 1), (&[0, 1, 0], 1), (&[0, 0, 1], 1)])
        );
        let w0 = Permutation::from_window(vec![3, 2, 1]).unwrap();
        assert_eq!(stanley(&w0, 2).to_string(), "x1^2*x2 + x1*x2^2");
    }

    #[test]
    fn staircase_series_is_stanley() {
        let d = StaircaseDigraph::new(3);
        let cols = columns_a(&d);
        for w in weak_a::weak_order(3, None).elements {
            let p = Permutation::from_window(w).unwrap();
            let s = d.section_of(&p);
            for m in 1..=3 {
                let g = gamma(d.graph(), &s, &cols, m, None).unwrap();
                assert_eq!(g, stanley(&p, m), "window {p} m={m}");
                assert!(g.is_symmetric());
            }
        }
        let d = StaircaseDigraph::new(4);
        let cols = columns_a(&d);
        for window in [vec![4, 3, 2, 1], vec![2, 4, 1, 3]] {
            let p = Permutation::from_window(window).unwrap();
            let s = d.section_of(&p);
            assert_eq!(
                gamma(d.graph(), &s, &cols, 3, None).unwrap(),
                stanley(&p, 3)
            );
        }
    }

    #[test]
    fn cyclically_decreasing_elements_are_subset_indexed() {
        let els = cyclically_decreasing_elements(3);
        assert_eq!(els.len(), 7);
        let mut lengths: Vec<usize> = els.iter().map(|p| p.length()).collect();
        lengths.sort_unstable();
        assert_eq!(lengths, vec![0, 1, 1, 1, 2, 2, 2]);
    }

    #[test]
    fn affine_stanley_examples() {
        let id = AffinePermutation::identity(3);
        assert_eq!(affine_stanley(&id, 2).to_string(), "1");
        let s1 = id.apply_generator(1);
        assert_eq!(
            affine_stanley(&s1, 2),
            poly(2, &[(&[1, 0], 1), (&[0, 1], 1)])
        );
        let p = AffinePermutation::from_window(vec![3, 1, 2]).unwrap();
        assert_eq!(
            affine_stanley(&p, 2),
            poly(2, &[(&[2, 0], 1), (&[1, 1], 1), (&[0, 2], 1)])
        );
        let q = AffinePermutation::from_window(vec![2, 3, 1]).unwrap();
        assert_eq!(affine_stanley(&q, 2), poly(2, &[(&[1, 1], 1)]));
    }

    #[test]
    fn cylinder_series_is_affine_stanley() {
        let max_len = 3usize;
        let depth = weak_affine::weak_order(3, max_len)
            .elements
            .iter()
            .map(|w| {
                let p = AffinePermutation::from_window(w.clone()).unwrap();
                sufficient_depth(3, &p.inversions())
            })
            .max()
            .unwrap();
        let d = CylinderDigraph::new(3, depth);
        let cols = columns_affine(&d);
        for w in weak_affine::weak_order(3, max_len).elements {
            let p = AffinePermutation::from_window(w).unwrap();
            let s = d.section_of(&p).unwrap();
            for m in 1..=2 {
                let g = gamma(d.graph(), &s, &cols, m, None).unwrap();
                assert_eq!(g, affine_stanley(&p, m), "window {p} m={m}");
                assert!(g.is_quasi_symmetric());
            }
        }
    }

    #[test]
    fn leading_cell_examples() {
        let d = StaircaseDigraph::new(3);
        let w0 = Permutation::from_window(vec![3, 2, 1]).unwrap();
        let f = SemiStandardFunction::new(BTreeMap::from([
            (d.vertex(StaircaseBox { a: 1, b: 2 }), 1),
            (d.vertex(StaircaseBox { a: 1, b: 3 }), 2),
            (d.vertex(StaircaseBox { a: 2, b: 3 }), 2),
        ]));
        assert!(is_semi_standard(
            d.graph(),
            &d.section_of(&w0),
            &columns_a(&d),
            &f
        ));
        assert_eq!(leading_cell(&f, &d, &w0), Some(StaircaseBox { a: 2, b: 3 }));
        assert_eq!(
            leading_cell(&SemiStandardFunction::new(BTreeMap::new()), &d, &w0),
            None
        );
    }

    #[test]
    fn word_weight_decomposition_round_trips() {
        let d = StaircaseDigraph::new(3);
        let cols = columns_a(&d);
        for w in weak_a::weak_order(3, None).elements {
            let p = Permutation::from_window(w).unwrap();
            let s = d.section_of(&p);
            for f in semi_standard_functions(d.graph(), &s, &cols, 3) {
                let (word, weights) = to_word_and_weights(&f, &d, &p);
                // the word multiplies back to p and weights follow its rises
                let mut q = Permutation::identity(3);
                for &i in &word {
                    assert!(q.has_ascent(i));
                    q = q.swap_positions(i);
                }
                assert_eq!(q, p);
                for j in 1..word.len() {
                    assert!(weights[j - 1] <= weights[j]);
                    if word[j - 1] < word[j] {
                        assert!(weights[j - 1] < weights[j]);
                    }
                }
                let (back, f2) = from_word_and_weights(3, &word, &weights).unwrap();
                assert_eq!(back, p);
                assert_eq!(f2, f);
            }
        }
    }

    #[test]
    fn invalid_decompositions_are_rejected() {
        assert_eq!(
            from_word_and_weights(3, &[1, 1], &[1, 2]).unwrap_err(),
            QuasisymError::InvalidDecomposition
        );
        assert_eq!(
            from_word_and_weights(3, &[1, 2], &[2, 2]).unwrap_err(),
            QuasisymError::InvalidDecomposition
        );
        assert_eq!(
            from_word_and_weights(3, &[1], &[1, 2]).unwrap_err(),
            QuasisymError::InvalidDecomposition
        );
    }

    #[test]
    fn affine_factorization_is_sequence_independent() {
        let max_len = 3usize;
        let d = CylinderDigraph::new(3, 8);
        let cols = columns_affine(&d);
        for w in weak_affine::weak_order(3, max_len).elements {
            let p = AffinePermutation::from_window(w).unwrap();
            let s = d.section_of(&p).unwrap();
            for f in semi_standard_functions(d.graph(), &s, &cols, 2) {
                let seqs = d.graph().peeling_sequences(s.members());
                let compatible: Vec<&Vec<VertexId>> = seqs
                    .iter()
                    .filter(|seq| {
                        seq.windows(2).all(|w| f.value(w[0]) <= f.value(w[1]))
                            && (0..seq.len()).all(|i| {
                                (i + 1..seq.len()).all(|j| {
                                    !cols.set(seq[i]).contains(seq[j])
                                        || f.value(seq[i]) < f.value(seq[j])
                                })
                            })
                    })
                    .collect();
                assert!(!compatible.is_empty());
                let factorizations: BTreeSet<Vec<AffinePermutation>> = compatible
                    .iter()
                    .map(|seq| affine_factorization_along(&d, &f, seq, 2))
                    .collect();
                assert_eq!(factorizations.len(), 1, "window {p}");
                let factors = factorizations.into_iter().next().unwrap();
                assert_eq!(factors[0].multiply(&factors[1]), p);
                assert_eq!(
                    factors.iter().map(|v| v.length()).sum::<usize>(),
                    p.length()
                );
            }
        }
    }
}
