//! Weak order on the affine symmetric group with `n` generators: bijections
//! of the integers satisfying `s(q + n) = s(q) + n` whose base window sums
//! to `n(n+1)/2`. The diagram lives on a cylinder: boxes `(a,b)` with
//! `a` in `[n]`, `a < b`, `b` not congruent to `a`. The digraph is infinite,
//! so all computations run inside a finite window of rows `b <= a + depth*n`,
//! which is closed under out-arcs; a depth bound per section keeps every
//! answer faithful to the infinite digraph.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::digraph::{InitialSection, ValuedDigraph, VertexId, VertexSet};
use crate::order::{generate, GeneratedOrder};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum WeakAffineError {
    #[error("window entries must be distinct modulo n and sum to n(n+1)/2")]
    InvalidWindow,
    #[error("set is not the inversion set of an affine permutation")]
    NotInversionSet,
    #[error("inversion set does not fit in a window of depth {depth}")]
    WindowTooShallow { depth: u32 },
}

/// Affine permutation given by its base window `[s(1),...,s(n)]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct AffinePermutation {
    window: Vec<i64>,
}

impl AffinePermutation {
    pub fn identity(n: u32) -> Self {
        assert!(n >= 2, "affine window size must be at least 2");
        AffinePermutation {
            window: (1..=n as i64).collect(),
        }
    }

    pub fn from_window(window: Vec<i64>) -> Result<Self, WeakAffineError> {
        let n = window.len() as i64;
        if n < 2 {
            return Err(WeakAffineError::InvalidWindow);
        }
        let mut seen = vec![false; n as usize];
        for &v in &window {
            let r = v.rem_euclid(n) as usize;
            if seen[r] {
                return Err(WeakAffineError::InvalidWindow);
            }
            seen[r] = true;
        }
        if window.iter().sum::<i64>() != n * (n + 1) / 2 {
            return Err(WeakAffineError::InvalidWindow);
        }
        Ok(AffinePermutation { window })
    }

    pub fn n(&self) -> u32 {
        self.window.len() as u32
    }

    pub fn window(&self) -> &[i64] {
        &self.window
    }

    /// Image of any integer point.
    pub fn value(&self, q: i64) -> i64 {
        let n = self.window.len() as i64;
        let base = (q - 1).rem_euclid(n);
        let shift = (q - 1).div_euclid(n);
        self.window[base as usize] + shift * n
    }

    /// Preimage of any integer point.
    pub fn position(&self, v: i64) -> i64 {
        let n = self.window.len() as i64;
        for (j, &w) in self.window.iter().enumerate() {
            if (v - w).rem_euclid(n) == 0 {
                return j as i64 + 1 + (v - w) / n * n;
            }
        }
        unreachable!("window residues cover all classes");
    }

    /// Right multiplication by generator `s` in `1..=n`, swapping the
    /// point classes `s` and `s+1`.
    pub fn apply_generator(&self, s: u32) -> AffinePermutation {
        let n = self.window.len();
        assert!(s >= 1 && s as usize <= n);
        let mut w = self.window.clone();
        if (s as usize) < n {
            w.swap(s as usize - 1, s as usize);
        } else {
            let first = w[0];
            w[0] = w[n - 1] - n as i64;
            w[n - 1] = first + n as i64;
        }
        AffinePermutation { window: w }
    }

    /// True when `apply_generator(s)` increases length.
    pub fn lengthens(&self, s: u32) -> bool {
        let n = self.window.len();
        if (s as usize) < n {
            self.window[s as usize - 1] < self.window[s as usize]
        } else {
            self.window[n - 1] < self.window[0] + n as i64
        }
    }

    pub fn multiply(&self, other: &AffinePermutation) -> AffinePermutation {
        assert_eq!(self.n(), other.n());
        let window = (1..=self.n() as i64)
            .map(|q| self.value(other.value(q)))
            .collect();
        AffinePermutation { window }
    }

    pub fn inverse(&self) -> AffinePermutation {
        let window = (1..=self.n() as i64).map(|v| self.position(v)).collect();
        AffinePermutation { window }
    }

    /// Inversions normalized to first coordinate in `[n]`: pairs `a < b`
    /// with the position of `b` left of the position of `a`. Finite.
    pub fn inversions(&self) -> BTreeSet<(i64, i64)> {
        let n = self.window.len() as i64;
        let mut out = BTreeSet::new();
        for a in 1..=n {
            let pa = self.position(a);
            for &w in &self.window {
                if (w - a).rem_euclid(n) == 0 {
                    continue;
                }
                // smallest b > a in the class of w, then step by n while
                // the position keeps landing left of a
                let mut b = a + 1 + (w - a - 1).rem_euclid(n);
                while self.position(b) < pa {
                    out.insert((a, b));
                    b += n;
                }
            }
        }
        out
    }

    /// Coxeter length.
    pub fn length(&self) -> usize {
        self.inversions().len()
    }

    /// Number of points strictly between `a` and `b` in value, outside the
    /// class of `a`, that sit between them in position as well.
    pub fn between_count(&self, a: i64, b: i64) -> u32 {
        debug_assert!(a < b);
        let n = self.window.len() as i64;
        let (pa, pb) = (self.position(a), self.position(b));
        ((a + 1)..b)
            .filter(|&k| (k - a).rem_euclid(n) != 0)
            .filter(|&k| {
                let pk = self.position(k);
                pa <= pk && pk <= pb
            })
            .count() as u32
    }

    pub fn adjacent(&self, a: i64, b: i64) -> bool {
        self.position(b) == self.position(a) + 1
    }
}

impl fmt::Display for AffinePermutation {
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

/// Depth sufficient for every question about the given inversion set: the
/// set fits in the window with enough spare rows that boxes outside can
/// neither turn erasable nor violate the membership inequalities.
pub fn sufficient_depth(n: u32, inv: &BTreeSet<(i64, i64)>) -> u32 {
    match inv.iter().map(|&(_, b)| b).max() {
        None => 1,
        Some(max_b) => ((max_b - 1) / n as i64) as u32 + inv.len() as u32 + 1,
    }
}

/// Finite window of the cylindrical diagram: boxes `(a,b)` with
/// `b <= a + depth * n`, closed under out-arcs.
#[derive(Debug, Clone)]
pub struct CylinderDigraph {
    n: u32,
    depth: u32,
    graph: ValuedDigraph,
    boxes: Vec<(i64, i64)>,
    ids: HashMap<(i64, i64), VertexId>,
}

impl CylinderDigraph {
    pub fn new(n: u32, depth: u32) -> Self {
        assert!(n >= 2, "cylinder needs window size at least 2");
        assert!(depth >= 1);
        let nn = n as i64;
        let mut boxes = Vec::new();
        for a in 1..=nn {
            for b in (a + 1)..=(a + depth as i64 * nn) {
                if (b - a).rem_euclid(nn) != 0 {
                    boxes.push((a, b));
                }
            }
        }
        let ids: HashMap<(i64, i64), VertexId> = boxes
            .iter()
            .enumerate()
            .map(|(i, &bx)| (bx, VertexId(i as u32)))
            .collect();
        let mut arcs = Vec::new();
        let mut thetas = Vec::new();
        for (i, &(a, b)) in boxes.iter().enumerate() {
            let mut targets: BTreeSet<(i64, i64)> = BTreeSet::new();
            let mut column = 0u32;
            for k in (a + 1)..b {
                if (k - a).rem_euclid(nn) != 0 {
                    targets.insert((a, k));
                    column += 1;
                }
                // row boxes (k,b) wrap around the cylinder: shift the
                // representative until its first coordinate lies in [n]
                if (b - k).rem_euclid(nn) != 0 {
                    let j = (k - 1).div_euclid(nn);
                    targets.insert((k - j * nn, b - j * nn));
                }
            }
            thetas.push(column);
            for t in targets {
                debug_assert!(ids.contains_key(&t), "window must be closed under arcs");
                arcs.push((i as u32, ids[&t].0));
            }
        }
        let labels = boxes.iter().map(|&(a, b)| format!("({a},{b})")).collect();
        let graph = ValuedDigraph::with_labels(thetas, arcs, labels)
            .expect("cylinder window is valid by construction");
        CylinderDigraph {
            n,
            depth,
            graph,
            boxes,
            ids,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn graph(&self) -> &ValuedDigraph {
        &self.graph
    }

    pub fn boxes(&self) -> &[(i64, i64)] {
        &self.boxes
    }

    pub fn contains_box(&self, a: i64, b: i64) -> bool {
        self.ids.contains_key(&(a, b))
    }

    pub fn vertex(&self, a: i64, b: i64) -> VertexId {
        self.ids[&(a, b)]
    }

    pub fn box_of(&self, v: VertexId) -> (i64, i64) {
        self.boxes[v.index()]
    }

    pub fn section_of(&self, p: &AffinePermutation) -> Result<InitialSection, WeakAffineError> {
        assert_eq!(p.n(), self.n);
        let inv = p.inversions();
        if sufficient_depth(self.n, &inv) > self.depth {
            return Err(WeakAffineError::WindowTooShallow { depth: self.depth });
        }
        let members: VertexSet = inv.into_iter().map(|(a, b)| self.vertex(a, b)).collect();
        Ok(InitialSection::new(&self.graph, members)
            .expect("affine inversion sets are initial sections"))
    }

    /// Affine permutation whose inversion set is the given vertex set,
    /// rebuilt by peeling the set and applying one generator per box.
    pub fn affine_permutation_of(
        &self,
        s: &VertexSet,
    ) -> Result<AffinePermutation, WeakAffineError> {
        let seq = self
            .graph
            .peeling_sequence(s)
            .ok_or(WeakAffineError::NotInversionSet)?;
        let nn = self.n as i64;
        let mut p = AffinePermutation::identity(self.n);
        for v in seq {
            let (a, b) = self.box_of(v);
            let pa = p.position(a);
            if p.position(b) != pa + 1 {
                return Err(WeakAffineError::NotInversionSet);
            }
            let gen = ((pa - 1).rem_euclid(nn)) as u32 + 1;
            p = p.apply_generator(gen);
        }
        debug_assert_eq!(
            p.inversions(),
            s.iter().map(|v| self.box_of(v)).collect::<BTreeSet<_>>()
        );
        Ok(p)
    }

    pub fn residual_value(&self, p: &AffinePermutation, a: i64, b: i64) -> Option<u32> {
        if p.position(a) > p.position(b) {
            None
        } else {
            Some(p.between_count(a, b))
        }
    }
}

/// The affine weak order generated directly from the `n` generators,
/// up to the given length.
pub fn weak_order(n: u32, max_length: usize) -> GeneratedOrder<Vec<i64>> {
    let identity: Vec<i64> = (1..=n as i64).collect();
    generate(
        identity,
        n as usize,
        |w, s| {
            AffinePermutation { window: w.clone() }
                .apply_generator(s as u32 + 1)
                .window
        },
        |w, s| AffinePermutation { window: w.clone() }.lengthens(s as u32 + 1),
        Some(max_length),
    )
}
