//! Right weak order on the symmetric group, encoded as a valued digraph on
//! the staircase diagram. Boxes are pairs `(a,b)` with `1 <= a < b <= n`;
//! the box digraph points into the hook of each box and carries the value
//! `b - a - 1`. Initial sections are exactly the inversion sets, so the
//! section lattice is the weak order.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::digraph::{InitialSection, ValuedDigraph, VertexId, VertexSet};
use crate::order::{generate, GeneratedOrder};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum WeakAError {
    #[error("window is not a permutation of 1..=n")]
    InvalidWindow,
    #[error("set is not the inversion set of a permutation")]
    NotInversionSet,
}

/// Permutation in one-line notation; `window[i]` is the image of `i + 1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Permutation {
    window: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: u32) -> Self {
        Permutation {
            window: (1..=n).collect(),
        }
    }

    pub fn from_window(window: Vec<u32>) -> Result<Self, WeakAError> {
        let n = window.len() as u32;
        let mut seen = vec![false; n as usize];
        for &v in &window {
            if v < 1 || v > n || seen[(v - 1) as usize] {
                return Err(WeakAError::InvalidWindow);
            }
            seen[(v - 1) as usize] = true;
        }
        Ok(Permutation { window })
    }

    pub fn n(&self) -> u32 {
        self.window.len() as u32
    }

    pub fn window(&self) -> &[u32] {
        &self.window
    }

    /// Image of `i`, 1-based.
    pub fn value(&self, i: u32) -> u32 {
        self.window[(i - 1) as usize]
    }

    /// Position of value `v`, 1-based.
    pub fn position(&self, v: u32) -> u32 {
        self.window
            .iter()
            .position(|&x| x == v)
            .expect("value in range") as u32
            + 1
    }

    /// Right multiplication by the adjacent transposition swapping
    /// positions `i` and `i + 1`.
    pub fn swap_positions(&self, i: u32) -> Permutation {
        let mut w = self.window.clone();
        w.swap((i - 1) as usize, i as usize);
        Permutation { window: w }
    }

    /// True when the move `swap_positions(i)` increases length.
    pub fn has_ascent(&self, i: u32) -> bool {
        self.value(i) < self.value(i + 1)
    }

    pub fn inversion_count(&self) -> usize {
        let n = self.window.len();
        (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.window[i] > self.window[j])
            .count()
    }

    /// Pairs `a < b` whose order the permutation reverses.
    pub fn inversions(&self) -> BTreeSet<(u32, u32)> {
        let n = self.n();
        let mut out = BTreeSet::new();
        for a in 1..=n {
            for b in (a + 1)..=n {
                if self.position(a) > self.position(b) {
                    out.insert((a, b));
                }
            }
        }
        out
    }

    /// Number of values strictly between `a` and `b` that the window
    /// places strictly between them.
    pub fn between_count(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < b);
        ((a + 1)..b)
            .filter(|&k| self.position(a) < self.position(k) && self.position(k) < self.position(b))
            .count() as u32
    }

    /// True when `b` immediately follows `a` in the window.
    pub fn adjacent(&self, a: u32, b: u32) -> bool {
        self.position(b) == self.position(a) + 1
    }
}

impl fmt::Display for Permutation {
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

/// Staircase box `(a, b)`, `1 <= a < b <= n`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct StaircaseBox {
    pub a: u32,
    pub b: u32,
}

impl fmt::Display for StaircaseBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// The staircase diagram of rank `n` as a valued digraph.
#[derive(Debug, Clone)]
pub struct StaircaseDigraph {
    n: u32,
    graph: ValuedDigraph,
    boxes: Vec<StaircaseBox>,
    ids: HashMap<StaircaseBox, VertexId>,
}

impl StaircaseDigraph {
    pub fn new(n: u32) -> Self {
        // diagonal-major: boxes closest to the staircase edge first
        let mut boxes = Vec::new();
        for diff in 1..n {
            for a in 1..=(n - diff) {
                boxes.push(StaircaseBox { a, b: a + diff });
            }
        }
        let ids: HashMap<StaircaseBox, VertexId> = boxes
            .iter()
            .enumerate()
            .map(|(i, &bx)| (bx, VertexId(i as u32)))
            .collect();
        let mut arcs = Vec::new();
        let mut thetas = Vec::new();
        for (i, &StaircaseBox { a, b }) in boxes.iter().enumerate() {
            for k in (a + 1)..b {
                arcs.push((i as u32, ids[&StaircaseBox { a, b: k }].0));
                arcs.push((i as u32, ids[&StaircaseBox { a: k, b }].0));
            }
            thetas.push(b - a - 1);
        }
        let labels = boxes.iter().map(|bx| bx.to_string()).collect();
        let graph = ValuedDigraph::with_labels(thetas, arcs, labels)
            .expect("staircase digraph is valid by construction");
        for (i, &StaircaseBox { a, b }) in boxes.iter().enumerate() {
            debug_assert_eq!(
                graph.out_degree(VertexId(i as u32)) as u32,
                2 * (b - a - 1),
                "every hook value must be half the out-degree"
            );
        }
        StaircaseDigraph {
            n,
            graph,
            boxes,
            ids,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn graph(&self) -> &ValuedDigraph {
        &self.graph
    }

    pub fn boxes(&self) -> &[StaircaseBox] {
        &self.boxes
    }

    pub fn vertex(&self, bx: StaircaseBox) -> VertexId {
        self.ids[&bx]
    }

    pub fn box_of(&self, v: VertexId) -> StaircaseBox {
        self.boxes[v.index()]
    }

    pub fn section_from_boxes<I: IntoIterator<Item = StaircaseBox>>(
        &self,
        boxes: I,
    ) -> Result<InitialSection, WeakAError> {
        let members: VertexSet = boxes.into_iter().map(|bx| self.vertex(bx)).collect();
        InitialSection::new(&self.graph, members).map_err(|_| WeakAError::NotInversionSet)
    }

    /// Inversion set of a permutation as an initial section.
    pub fn section_of(&self, p: &Permutation) -> InitialSection {
        assert_eq!(p.n(), self.n);
        let members: VertexSet = p
            .inversions()
            .into_iter()
            .map(|(a, b)| self.vertex(StaircaseBox { a, b }))
            .collect();
        InitialSection::new(&self.graph, members).expect("inversion sets are initial sections")
    }

    /// Permutation whose inversion set is the given vertex set.
    pub fn permutation_of(&self, s: &VertexSet) -> Result<Permutation, WeakAError> {
        if !self.graph.is_initial_section(s) {
            return Err(WeakAError::NotInversionSet);
        }
        let inv: BTreeSet<(u32, u32)> = s
            .iter()
            .map(|v| {
                let bx = self.box_of(v);
                (bx.a, bx.b)
            })
            .collect();
        let p = Permutation {
            window: window_from_inversions(self.n, &inv),
        };
        debug_assert_eq!(p.inversions(), inv);
        Ok(p)
    }

    /// Residual value of a box over the inversion set of `p`; None when
    /// the box is already inverted.
    pub fn residual_value(&self, p: &Permutation, bx: StaircaseBox) -> Option<u32> {
        if p.position(bx.a) > p.position(bx.b) {
            None
        } else {
            Some(p.between_count(bx.a, bx.b))
        }
    }
}

/// Sorts `1..=n` so that `a` precedes `b > a` exactly when `(a,b)` is not
/// inverted. For genuine inversion sets this comparator is a total order.
pub(crate) fn window_from_inversions(n: u32, inv: &BTreeSet<(u32, u32)>) -> Vec<u32> {
    let mut vals: Vec<u32> = (1..=n).collect();
    vals.sort_by(|&x, &y| {
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        let lo_first = !inv.contains(&(lo, hi));
        let x_first = if x == lo { lo_first } else { !lo_first };
        if x_first {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    vals
}

/// The weak order generated directly from adjacent transpositions,
/// bypassing the diagram encoding.
pub fn weak_order(n: u32, max_length: Option<usize>) -> GeneratedOrder<Vec<u32>> {
    let identity: Vec<u32> = (1..=n).collect();
    generate(
        identity,
        (n.max(1) - 1) as usize,
        |w, s| {
            let mut out = w.clone();
            out.swap(s, s + 1);
            out
        },
        |w, s| w[s] < w[s + 1],
        max_length,
    )
}
