//! Weak order on the hyperoctahedral group. Signed permutations are
//! bijections of `[-n..n] \ {0}` commuting with negation; the diagram has
//! n^2 boxes `(a,b)` with `a < b`, `|a| <= b`, `b` a row in `[n]`,
//! including the diagonal boxes `(-b,b)`. Hooks fold the staircase
//! construction through the sign symmetry, so every out-degree is even and
//! the value of a box is half of it.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::digraph::{InitialSection, ValuedDigraph, VertexId, VertexSet};
use crate::order::{generate, GeneratedOrder};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum WeakBError {
    #[error("window entries must have distinct absolute values 1..=n")]
    InvalidWindow,
    #[error("set is not the signed inversion set of a signed permutation")]
    NotInversionSet,
}

/// Signed permutation; `window[i]` is the image of `i + 1`, and images of
/// negative points follow by symmetry.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SignedPermutation {
    window: Vec<i32>,
}

impl SignedPermutation {
    pub fn identity(n: u32) -> Self {
        SignedPermutation {
            window: (1..=n as i32).collect(),
        }
    }

    pub fn from_window(window: Vec<i32>) -> Result<Self, WeakBError> {
        let n = window.len() as i32;
        let mut seen = vec![false; n as usize];
        for &v in &window {
            let a = v.abs();
            if a < 1 || a > n || seen[(a - 1) as usize] {
                return Err(WeakBError::InvalidWindow);
            }
            seen[(a - 1) as usize] = true;
        }
        Ok(SignedPermutation { window })
    }

    pub fn n(&self) -> u32 {
        self.window.len() as u32
    }

    pub fn window(&self) -> &[i32] {
        &self.window
    }

    /// Image of `m` for `m` in `[-n..n] \ {0}`.
    pub fn value(&self, m: i32) -> i32 {
        if m > 0 {
            self.window[(m - 1) as usize]
        } else {
            -self.window[(-m - 1) as usize]
        }
    }

    /// Position of value `v`, a nonzero integer in `[-n..n]`.
    pub fn position(&self, v: i32) -> i32 {
        for (i, &w) in self.window.iter().enumerate() {
            if w == v {
                return i as i32 + 1;
            }
            if w == -v {
                return -(i as i32 + 1);
            }
        }
        panic!("value {v} out of range");
    }

    /// Index of value `v` inside the full window
    /// `[w(-n),...,w(-1),w(1),...,w(n)]`.
    pub fn full_index(&self, v: i32) -> usize {
        let n = self.window.len() as i32;
        let p = self.position(v);
        if p > 0 {
            (n + p - 1) as usize
        } else {
            (n + p) as usize
        }
    }

    pub fn full_window(&self) -> Vec<i32> {
        let mut out: Vec<i32> = self.window.iter().rev().map(|&v| -v).collect();
        out.extend_from_slice(&self.window);
        out
    }

    /// Right multiplication by generator `s`, where `s = 0` negates the
    /// first entry and `s = i >= 1` swaps positions i and i+1.
    pub fn apply_generator(&self, s: u32) -> SignedPermutation {
        let mut w = self.window.clone();
        if s == 0 {
            w[0] = -w[0];
        } else {
            w.swap((s - 1) as usize, s as usize);
        }
        SignedPermutation { window: w }
    }

    /// True when `apply_generator(s)` increases length: the first entry is
    /// positive (s = 0), or an ascent sits at position s.
    pub fn lengthens(&self, s: u32) -> bool {
        if s == 0 {
            self.window[0] > 0
        } else {
            self.window[(s - 1) as usize] < self.window[s as usize]
        }
    }

    /// Signed inversions: diagram boxes whose entries the permutation
    /// puts out of order.
    pub fn inversions(&self) -> BTreeSet<(i32, i32)> {
        let n = self.n();
        let mut out = BTreeSet::new();
        for (a, b) in diagram_boxes(n) {
            if self.position(a) > self.position(b) {
                out.insert((a, b));
            }
        }
        out
    }

    pub fn inversion_count(&self) -> usize {
        self.inversions().len()
    }

    /// Residual value statistic of a non-inverted box: values strictly
    /// between `a` and `b` placed between them, folded onto `[1, -a)` for
    /// the diagonal boxes `b = -a`.
    pub fn between_count(&self, a: i32, b: i32) -> u32 {
        debug_assert!(a < b && a.abs() <= b);
        let (pa, pb) = (self.position(a), self.position(b));
        if b == -a {
            (1..b)
                .filter(|&k| pa < self.position(k) && self.position(k) < pb)
                .count() as u32
        } else {
            ((a + 1)..b)
                .filter(|&k| k != 0 && pa < self.position(k) && self.position(k) < pb)
                .count() as u32
        }
    }

    /// True when `b` immediately follows `a` in the full window.
    pub fn adjacent(&self, a: i32, b: i32) -> bool {
        self.full_index(b) == self.full_index(a) + 1
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.window.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

fn is_box(n: u32, x: i32, y: i32) -> bool {
    x != 0 && y >= 1 && y <= n as i32 && x < y && x.abs() <= y
}

/// Boxes in row-major order: row `b` holds `(-b,b),...,(-1,b),(1,b),...`.
fn diagram_boxes(n: u32) -> Vec<(i32, i32)> {
    let mut out = Vec::new();
    for b in 1..=n as i32 {
        for a in -b..b {
            if a != 0 {
                out.push((a, b));
            }
        }
    }
    out
}

/// The shifted diagram of rank `n` as a valued digraph.
#[derive(Debug, Clone)]
pub struct ShiftedDigraph {
    n: u32,
    graph: ValuedDigraph,
    boxes: Vec<(i32, i32)>,
    ids: HashMap<(i32, i32), VertexId>,
}

impl ShiftedDigraph {
    pub fn new(n: u32) -> Self {
        let boxes = diagram_boxes(n);
        debug_assert_eq!(boxes.len(), (n * n) as usize);
        let ids: HashMap<(i32, i32), VertexId> = boxes
            .iter()
            .enumerate()
            .map(|(i, &bx)| (bx, VertexId(i as u32)))
            .collect();
        let mut arcs = Vec::new();
        let mut thetas = Vec::new();
        for (i, &(a, b)) in boxes.iter().enumerate() {
            let mut targets: BTreeSet<(i32, i32)> = BTreeSet::new();
            for k in (a + 1)..b {
                if k == 0 {
                    continue;
                }
                for cand in [(k, b), (a, k), (-k, -a)] {
                    if cand != (a, b) && is_box(n, cand.0, cand.1) {
                        targets.insert(cand);
                    }
                }
            }
            assert!(
                targets.len().is_multiple_of(2),
                "folded hooks must have even size, box ({a},{b})"
            );
            thetas.push(targets.len() as u32 / 2);
            for t in targets {
                arcs.push((i as u32, ids[&t].0));
            }
        }
        let labels = boxes.iter().map(|&(a, b)| format!("({a},{b})")).collect();
        let graph = ValuedDigraph::with_labels(thetas, arcs, labels)
            .expect("shifted digraph is valid by construction");
        let d = ShiftedDigraph {
            n,
            graph,
            boxes,
            ids,
        };
        // the stored value must match the identity's between-count
        #[cfg(debug_assertions)]
        {
            let id = SignedPermutation::identity(n);
            for &(a, b) in &d.boxes {
                debug_assert_eq!(d.graph.theta(d.vertex(a, b)), id.between_count(a, b));
            }
        }
        d
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn graph(&self) -> &ValuedDigraph {
        &self.graph
    }

    pub fn boxes(&self) -> &[(i32, i32)] {
        &self.boxes
    }

    pub fn vertex(&self, a: i32, b: i32) -> VertexId {
        self.ids[&(a, b)]
    }

    pub fn box_of(&self, v: VertexId) -> (i32, i32) {
        self.boxes[v.index()]
    }

    pub fn section_of(&self, p: &SignedPermutation) -> InitialSection {
        assert_eq!(p.n(), self.n);
        let members: VertexSet = p
            .inversions()
            .into_iter()
            .map(|(a, b)| self.vertex(a, b))
            .collect();
        InitialSection::new(&self.graph, members)
            .expect("signed inversion sets are initial sections")
    }

    /// Signed permutation whose inversion set is the given vertex set.
    pub fn signed_permutation_of(&self, s: &VertexSet) -> Result<SignedPermutation, WeakBError> {
        if !self.graph.is_initial_section(s) {
            return Err(WeakBError::NotInversionSet);
        }
        let inv: BTreeSet<(i32, i32)> = s.iter().map(|v| self.box_of(v)).collect();
        let n = self.n as i32;
        // order all nonzero points; pairs outside the diagram defer to
        // their mirror image under negation
        let mut vals: Vec<i32> = (-n..=n).filter(|&v| v != 0).collect();
        vals.sort_by(|&x, &y| {
            let (lo, hi) = if x < y { (x, y) } else { (y, x) };
            let lo_first = if is_box(self.n, lo, hi) {
                !inv.contains(&(lo, hi))
            } else {
                // (lo,hi) and (-hi,-lo) flip together under the symmetry
                !inv.contains(&(-hi, -lo))
            };
            let x_first = if x == lo { lo_first } else { !lo_first };
            if x_first {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        let window: Vec<i32> = vals[self.n as usize..].to_vec();
        let p = SignedPermutation::from_window(window).map_err(|_| WeakBError::NotInversionSet)?;
        debug_assert_eq!(p.full_window(), vals);
        debug_assert_eq!(p.inversions(), inv);
        Ok(p)
    }

    /// Residual value of a box over the inversion set of `p`; None when
    /// the box is already inverted.
    pub fn residual_value(&self, p: &SignedPermutation, a: i32, b: i32) -> Option<u32> {
        if p.position(a) > p.position(b) {
            None
        } else {
            Some(p.between_count(a, b))
        }
    }
}

/// The weak order generated directly from the signed generators.
pub fn weak_order(n: u32, max_length: Option<usize>) -> GeneratedOrder<Vec<i32>> {
    let identity: Vec<i32> = (1..=n as i32).collect();
    generate(
        identity,
        n as usize,
        |w, s| {
            let p = SignedPermutation { window: w.clone() };
            p.apply_generator(s as u32).window
        },
        |w, s| SignedPermutation { window: w.clone() }.lengthens(s as u32),
        max_length,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{self, BuildOptions};

    fn sp(w: &[i32]) -> SignedPermutation {
        SignedPermutation::from_window(w.to_vec()).unwrap()
    }

    #[test]
    fn diagram_has_n_squared_boxes() {
        for n in 1..=5u32 {
            assert_eq!(ShiftedDigraph::new(n).boxes().len(), (n * n) as usize);
        }
    }

    #[test]
    fn small_diagram_values_and_arcs() {
        let d = ShiftedDigraph::new(2);
        let g = d.graph();
        assert_eq!(g.theta(d.vertex(-1, 1)), 0);
        assert_eq!(g.theta(d.vertex(1, 2)), 0);
        assert_eq!(g.theta(d.vertex(-1, 2)), 1);
        assert_eq!(g.theta(d.vertex(-2, 2)), 1);
        let outs: BTreeSet<(i32, i32)> = g
            .out_neighbors(d.vertex(-2, 2))
            .map(|v| d.box_of(v))
            .collect();
        assert_eq!(outs, BTreeSet::from([(-1, 2), (1, 2)]));
        let outs: BTreeSet<(i32, i32)> = g
            .out_neighbors(d.vertex(-1, 2))
            .map(|v| d.box_of(v))
            .collect();
        assert_eq!(outs, BTreeSet::from([(-1, 1), (1, 2)]));
    }

    #[test]
    fn inversion_examples() {
        assert!(SignedPermutation::identity(2).inversions().is_empty());
        // flipping the sign of 1 inverts exactly the diagonal box (-1,1)
        assert_eq!(sp(&[-1, 2]).inversions(), BTreeSet::from([(-1, 1)]));
        // the longest element inverts every box
        assert_eq!(sp(&[-1, -2]).inversion_count(), 4);
        assert_eq!(sp(&[-1, -2, -3]).inversion_count(), 9);
    }

    #[test]
    fn full_window_layout() {
        let p = sp(&[-2, 1]);
        assert_eq!(p.full_window(), vec![-1, 2, -2, 1]);
        assert_eq!(p.position(-2), 1);
        assert_eq!(p.position(2), -1);
        assert_eq!(p.full_index(-1), 0);
        assert_eq!(p.full_index(1), 3);
    }

    #[test]
    fn generator_moves_change_length_by_one() {
        let ord = weak_order(3, None);
        for w in &ord.elements {
            let p = SignedPermutation { window: w.clone() };
            let len = p.inversion_count() as i64;
            for s in 0..3u32 {
                let q = p.apply_generator(s);
                let expected = if p.lengthens(s) { len + 1 } else { len - 1 };
                assert_eq!(q.inversion_count() as i64, expected, "{p} * s{s}");
            }
        }
    }

    #[test]
    fn section_count_is_hyperoctahedral_order() {
        let mut expected = 1usize;
        for n in 1..=3u32 {
            expected *= 2 * n as usize;
            let d = ShiftedDigraph::new(n);
            let lat = lattice::build(d.graph(), &BuildOptions::default()).unwrap();
            assert_eq!(lat.len(), expected, "n = {n}");
        }
    }

    #[test]
    fn reconstruction_round_trips_b3() {
        let d = ShiftedDigraph::new(3);
        for w in weak_order(3, None).elements {
            let p = SignedPermutation::from_window(w).unwrap();
            let s = d.section_of(&p);
            assert_eq!(d.signed_permutation_of(s.members()).unwrap(), p);
        }
    }

    #[test]
    fn reconstruction_rejects_non_sections() {
        let d = ShiftedDigraph::new(2);
        let s = VertexSet::single(d.vertex(-2, 2));
        assert_eq!(
            d.signed_permutation_of(&s),
            Err(WeakBError::NotInversionSet)
        );
    }

    #[test]
    fn residual_matches_window_statistics() {
        let d = ShiftedDigraph::new(3);
        for w in weak_order(3, None).elements {
            let p = SignedPermutation::from_window(w).unwrap();
            let r = d.graph().residual(d.section_of(&p).members()).unwrap();
            for &(a, b) in d.boxes() {
                match d.residual_value(&p, a, b) {
                    Some(v) => {
                        assert_eq!(r.theta(d.vertex(a, b)), v, "value at ({a},{b}) under {p}");
                        assert_eq!(
                            r.is_erasable(d.vertex(a, b)),
                            p.adjacent(a, b),
                            "erasability at ({a},{b}) under {p}"
                        );
                    }
                    None => assert!(!r.is_live(d.vertex(a, b))),
                }
            }
        }
    }

    #[test]
    fn lattice_is_isomorphic_to_weak_order() {
        for n in 1..=3u32 {
            let d = ShiftedDigraph::new(n);
            let lat = lattice::build(d.graph(), &BuildOptions::default()).unwrap();
            let ord = weak_order(n, None);
            assert_eq!(lat.len(), ord.len());
            let le = ord.reachability();
            let to_ord: Vec<usize> = lat
                .elements()
                .iter()
                .map(|e| {
                    let p = d.signed_permutation_of(e.members()).unwrap();
                    ord.index[&p.window().to_vec()]
                })
                .collect();
            for i in 0..lat.len() {
                for j in 0..lat.len() {
                    assert_eq!(
                        lat.le(i, j),
                        le[to_ord[i]][to_ord[j]],
                        "order mismatch at n={n}"
                    );
                }
            }
        }
    }
}
