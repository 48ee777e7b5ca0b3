//! Flag weak order on the wreath product of a cyclic group of order `r`
//! with the symmetric group: colored permutations ordered by moves that
//! raise the flag inversion number `r * inv + color sum` by one. The
//! diagram glues a block of `(r-1) * b` extra boxes with nonpositive
//! column index to the left of each staircase row; hooks of those boxes
//! sweep everything to their right in the row.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::digraph::{InitialSection, ValuedDigraph, VertexId, VertexSet};
use crate::order::{generate, GeneratedOrder};
use crate::weak_a::{window_from_inversions, Permutation};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FlagError {
    #[error("colors must lie in [0, r-1] and match the permutation size")]
    InvalidElement,
    #[error("set is not an initial section of the flag digraph")]
    NotInitialSection,
}

/// Right multiplication generators: `A(i)` swaps positions `i`, `i+1` and
/// recolors, `B(i)` raises the color at position `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlagGenerator {
    A(u32),
    B(u32),
}

/// Element of the wreath product: a window together with one color per
/// position, written `c1,...,cn | w1,...,wn`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ColoredPermutation {
    r: u32,
    colors: Vec<u32>,
    perm: Permutation,
}

impl ColoredPermutation {
    pub fn identity(r: u32, n: u32) -> Self {
        assert!(r >= 1);
        ColoredPermutation {
            r,
            colors: vec![0; n as usize],
            perm: Permutation::identity(n),
        }
    }

    pub fn new(r: u32, colors: Vec<u32>, perm: Permutation) -> Result<Self, FlagError> {
        if r < 1 || colors.len() != perm.n() as usize || colors.iter().any(|&c| c >= r) {
            return Err(FlagError::InvalidElement);
        }
        Ok(ColoredPermutation { r, colors, perm })
    }

    pub fn generator(r: u32, n: u32, g: FlagGenerator) -> Self {
        let delta = |i: u32| {
            let mut c = vec![0; n as usize];
            c[i as usize - 1] = 1 % r;
            c
        };
        match g {
            FlagGenerator::A(i) => {
                assert!(i >= 1 && i < n);
                ColoredPermutation {
                    r,
                    colors: delta(i),
                    perm: Permutation::identity(n).swap_positions(i),
                }
            }
            FlagGenerator::B(i) => {
                assert!(i >= 1 && i <= n);
                ColoredPermutation {
                    r,
                    colors: delta(i),
                    perm: Permutation::identity(n),
                }
            }
        }
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn n(&self) -> u32 {
        self.perm.n()
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    /// Group product: the left factor's colors are pulled through the right
    /// factor's window and added slotwise, modulo `r`.
    pub fn multiply(&self, other: &ColoredPermutation) -> ColoredPermutation {
        assert_eq!(self.r, other.r);
        assert_eq!(self.n(), other.n());
        let n = self.n();
        let colors = (1..=n)
            .map(|i| {
                (self.colors[other.perm.value(i) as usize - 1] + other.colors[i as usize - 1])
                    % self.r
            })
            .collect();
        let window = (1..=n)
            .map(|i| self.perm.value(other.perm.value(i)))
            .collect();
        ColoredPermutation {
            r: self.r,
            colors,
            perm: Permutation::from_window(window).expect("product of valid windows"),
        }
    }

    pub fn apply(&self, g: FlagGenerator) -> ColoredPermutation {
        self.multiply(&ColoredPermutation::generator(self.r, self.n(), g))
    }

    /// Flag inversion number, the rank statistic of the order.
    pub fn finv(&self) -> usize {
        self.r as usize * self.perm.inversion_count()
            + self.colors.iter().map(|&c| c as usize).sum::<usize>()
    }

    /// True when right multiplication by the generator is a cover: a color
    /// raise that does not wrap, or an adjacent swap whose right color is
    /// maximal and whose positions form an ascent.
    pub fn is_flag_cover(&self, g: FlagGenerator) -> bool {
        match g {
            FlagGenerator::B(i) => self.colors[i as usize - 1] != self.r - 1,
            FlagGenerator::A(i) => self.colors[i as usize] == self.r - 1 && self.perm.has_ascent(i),
        }
    }
}

impl fmt::Display for ColoredPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.colors.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, " | ")?;
        for (i, w) in self.perm.window().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

/// Staircase rows extended on the left: row `b` holds boxes `(a,b)` for
/// `-b(r-1) <= a <= -1` and `1 <= a < b`.
#[derive(Debug, Clone)]
pub struct FlagDigraph {
    r: u32,
    n: u32,
    graph: ValuedDigraph,
    boxes: Vec<(i64, i64)>,
}

impl FlagDigraph {
    pub fn new(r: u32, n: u32) -> Self {
        assert!(r >= 2, "single-colored case degenerates, use the staircase");
        assert!(n >= 1);
        let (rr, nn) = (r as i64, n as i64);
        let mut boxes = Vec::new();
        for b in 1..=nn {
            for a in (-b * (rr - 1))..=-1 {
                boxes.push((a, b));
            }
            for a in 1..b {
                boxes.push((a, b));
            }
        }
        let index = |a: i64, b: i64| -> u32 {
            boxes
                .binary_search_by_key(&(b, a), |&(x, y)| (y, x))
                .unwrap() as u32
        };
        let mut arcs = Vec::new();
        let mut thetas = Vec::new();
        for &(a, b) in &boxes {
            if a > 0 {
                for k in (a + 1)..b {
                    arcs.push((index(a, b), index(a, k)));
                    arcs.push((index(a, b), index(k, b)));
                }
                thetas.push((b - a - 1) as u32);
            } else {
                // the whole rest of the row, across both regions
                for x in (a + 1)..b {
                    if x != 0 {
                        arcs.push((index(a, b), index(x, b)));
                    }
                }
                thetas.push((b + a.div_euclid(rr - 1)) as u32);
            }
        }
        let labels = boxes.iter().map(|&(a, b)| format!("({a},{b})")).collect();
        let graph = ValuedDigraph::with_labels(thetas, arcs, labels)
            .expect("flag diagram is valid by construction");
        FlagDigraph { r, n, graph, boxes }
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn graph(&self) -> &ValuedDigraph {
        &self.graph
    }

    pub fn boxes(&self) -> &[(i64, i64)] {
        &self.boxes
    }

    pub fn vertex(&self, a: i64, b: i64) -> VertexId {
        let i = self
            .boxes
            .binary_search_by_key(&(b, a), |&(x, y)| (y, x))
            .expect("box must lie in the diagram");
        VertexId(i as u32)
    }

    pub fn box_of(&self, v: VertexId) -> (i64, i64) {
        self.boxes[v.index()]
    }

    /// Initial section attached to a colored permutation: the inversion
    /// boxes of its window plus a left-justified run in each extended row.
    pub fn section_of(&self, p: &ColoredPermutation) -> InitialSection {
        assert_eq!(p.r(), self.r);
        assert_eq!(p.n(), self.n);
        let rr = self.r as i64 - 1;
        let inv = p.perm().inversions();
        let mut ids: Vec<VertexId> = inv
            .iter()
            .map(|&(a, b)| self.vertex(a as i64, b as i64))
            .collect();
        for i in 1..=self.n as i64 {
            let right = inv.iter().filter(|&&(_, b)| b as i64 == i).count() as i64;
            let color = p.colors()[p.perm().position(i as u32) as usize - 1] as i64;
            for x in (-i * rr)..(-(i - right) * rr + color) {
                ids.push(self.vertex(x, i));
            }
        }
        InitialSection::new(&self.graph, ids.into_iter().collect())
            .expect("colored permutations map to initial sections")
    }

    /// Inverse of `section_of`: the window is read off the staircase part,
    /// colors count row members in the two regions.
    pub fn colored_permutation_of(&self, u: &VertexSet) -> Result<ColoredPermutation, FlagError> {
        if !self.graph.is_initial_section(u) {
            return Err(FlagError::NotInitialSection);
        }
        let mut inv = BTreeSet::new();
        let mut right = vec![0i64; self.n as usize];
        let mut left = vec![0i64; self.n as usize];
        for v in u.iter() {
            let (a, b) = self.box_of(v);
            if a > 0 {
                inv.insert((a as u32, b as u32));
                right[b as usize - 1] += 1;
            } else {
                left[b as usize - 1] += 1;
            }
        }
        let perm = Permutation::from_window(window_from_inversions(self.n, &inv))
            .expect("staircase part of a section is an inversion set");
        let mut colors = vec![0u32; self.n as usize];
        for i in 1..=self.n {
            let c = left[i as usize - 1] - (self.r as i64 - 1) * right[i as usize - 1];
            debug_assert!(0 <= c && c < self.r as i64);
            colors[perm.position(i) as usize - 1] = c as u32;
        }
        let p = ColoredPermutation {
            r: self.r,
            colors,
            perm,
        };
        debug_assert_eq!(self.section_of(&p).members(), u);
        Ok(p)
    }
}

/// All generators of the group on `n` letters, swaps first.
pub fn flag_generators(n: u32) -> Vec<FlagGenerator> {
    (1..n)
        .map(FlagGenerator::A)
        .chain((1..=n).map(FlagGenerator::B))
        .collect()
}

/// The flag weak order generated from the cover moves, keyed by
/// (colors, window).
pub fn flag_order(r: u32, n: u32) -> GeneratedOrder<(Vec<u32>, Vec<u32>)> {
    let gens = flag_generators(n);
    let unpack = |e: &(Vec<u32>, Vec<u32>)| ColoredPermutation {
        r,
        colors: e.0.clone(),
        perm: Permutation::from_window(e.1.clone()).unwrap(),
    };
    let moves = gens.clone();
    generate(
        (vec![0; n as usize], (1..=n).collect()),
        gens.len(),
        move |e, s| {
            let p = unpack(e).apply(moves[s]);
            (p.colors, p.perm.window().to_vec())
        },
        move |e, s| unpack(e).is_flag_cover(gens[s]),
        None,
    )
}
