//! Down-set and up-set lattices of a finite poset, realized as valued
//! digraphs on the ground set: arcs follow the strict order, the all-zero
//! valuation selects lower sets, the full-out-degree valuation selects
//! upper sets, and peeling sequences of the former are exactly the linear
//! extensions.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::digraph::{ValuedDigraph, VertexId, VertexSet};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("relation references element {0} outside the ground set")]
    ElementOutOfRange(u32),
    #[error("relation violates antisymmetry between {0} and {1}")]
    NotAntisymmetric(u32, u32),
    #[error("relation is not transitive: {0} <= {1} <= {2} but not {0} <= {2}")]
    NotTransitive(u32, u32, u32),
    #[error("expected {expected} labels, got {got}")]
    LabelCountMismatch { expected: usize, got: usize },
}

/// Partial order on elements `0..n`, stored as a dense relation matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    n: usize,
    le: Vec<bool>,
    labels: Vec<String>,
}

impl FinitePoset {
    /// Antichain on `n` elements.
    pub fn antichain(n: u32) -> Self {
        let n = n as usize;
        let mut le = vec![false; n * n];
        for x in 0..n {
            le[x * n + x] = true;
        }
        FinitePoset {
            n,
            le,
            labels: (0..n).map(|i| i.to_string()).collect(),
        }
    }

    /// Builds from the full relation; reflexivity is implied, antisymmetry
    /// and transitivity are validated.
    pub fn from_relations(n: u32, relations: &[(u32, u32)]) -> Result<Self, PosetError> {
        let mut p = FinitePoset::antichain(n);
        p.insert_pairs(relations)?;
        p.check_transitive()?;
        p.check_antisymmetric()?;
        Ok(p)
    }

    /// Builds from any generating set of pairs by taking the transitive
    /// closure; antisymmetry is validated afterwards.
    pub fn from_covers(n: u32, covers: &[(u32, u32)]) -> Result<Self, PosetError> {
        let mut p = FinitePoset::antichain(n);
        p.insert_pairs(covers)?;
        for k in 0..p.n {
            for x in 0..p.n {
                if p.le[x * p.n + k] {
                    for y in 0..p.n {
                        if p.le[k * p.n + y] {
                            p.le[x * p.n + y] = true;
                        }
                    }
                }
            }
        }
        p.check_antisymmetric()?;
        Ok(p)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, PosetError> {
        if labels.len() != self.n {
            return Err(PosetError::LabelCountMismatch {
                expected: self.n,
                got: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    fn insert_pairs(&mut self, pairs: &[(u32, u32)]) -> Result<(), PosetError> {
        for &(x, y) in pairs {
            for e in [x, y] {
                if e as usize >= self.n {
                    return Err(PosetError::ElementOutOfRange(e));
                }
            }
            self.le[x as usize * self.n + y as usize] = true;
        }
        Ok(())
    }

    fn check_antisymmetric(&self) -> Result<(), PosetError> {
        for x in 0..self.n {
            for y in (x + 1)..self.n {
                if self.le[x * self.n + y] && self.le[y * self.n + x] {
                    return Err(PosetError::NotAntisymmetric(x as u32, y as u32));
                }
            }
        }
        Ok(())
    }

    fn check_transitive(&self) -> Result<(), PosetError> {
        for x in 0..self.n {
            for y in 0..self.n {
                if self.le[x * self.n + y] {
                    for z in 0..self.n {
                        if self.le[y * self.n + z] && !self.le[x * self.n + z] {
                            return Err(PosetError::NotTransitive(x as u32, y as u32, z as u32));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> u32 {
        self.n as u32
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn le(&self, x: u32, y: u32) -> bool {
        self.le[x as usize * self.n + y as usize]
    }

    pub fn lt(&self, x: u32, y: u32) -> bool {
        x != y && self.le(x, y)
    }

    fn strict_arcs(&self) -> Vec<(u32, u32)> {
        let mut arcs = Vec::new();
        for x in 0..self.n as u32 {
            for y in 0..self.n as u32 {
                if self.lt(x, y) {
                    arcs.push((x, y));
                }
            }
        }
        arcs
    }

    /// Digraph whose initial sections are the lower sets: arcs along the
    /// strict order, valuation zero everywhere.
    pub fn downset_digraph(&self) -> ValuedDigraph {
        ValuedDigraph::with_labels(vec![0; self.n], self.strict_arcs(), self.labels.clone())
            .expect("strict order relation is acyclic")
    }

    /// Same digraph with full out-degree valuation; initial sections are
    /// the upper sets.
    pub fn upset_digraph(&self) -> ValuedDigraph {
        let arcs = self.strict_arcs();
        let mut theta = vec![0u32; self.n];
        for &(x, _) in &arcs {
            theta[x as usize] += 1;
        }
        ValuedDigraph::with_labels(theta, arcs, self.labels.clone())
            .expect("strict order relation is acyclic")
    }

    /// All linear extensions by filtering every ordering of the ground set.
    pub fn linear_extensions(&self) -> Vec<Vec<VertexId>> {
        let mut all = Vec::new();
        let mut current: Vec<u32> = Vec::new();
        let mut used = vec![false; self.n];
        self.collect_orders(&mut current, &mut used, &mut all);
        all.into_iter()
            .filter(|ord| {
                let pos = |e: u32| ord.iter().position(|&x| x == e).unwrap();
                (0..self.n as u32)
                    .all(|x| (0..self.n as u32).all(|y| !self.lt(x, y) || pos(x) < pos(y)))
            })
            .map(|ord| ord.into_iter().map(VertexId).collect())
            .collect()
    }

    fn collect_orders(&self, current: &mut Vec<u32>, used: &mut [bool], out: &mut Vec<Vec<u32>>) {
        if current.len() == self.n {
            out.push(current.clone());
            return;
        }
        for e in 0..self.n as u32 {
            if !used[e as usize] {
                used[e as usize] = true;
                current.push(e);
                self.collect_orders(current, used, out);
                current.pop();
                used[e as usize] = false;
            }
        }
    }

    /// All lower sets by brute force over subsets.
    pub fn lower_sets(&self) -> Vec<VertexSet> {
        self.closed_subsets(|inside, outside| self.lt(outside, inside))
    }

    /// All upper sets by brute force over subsets.
    pub fn upper_sets(&self) -> Vec<VertexSet> {
        self.closed_subsets(|inside, outside| self.lt(inside, outside))
    }

    fn closed_subsets(&self, breaks: impl Fn(u32, u32) -> bool) -> Vec<VertexSet> {
        assert!(self.n < 26, "brute-force subset scan");
        let mut out = Vec::new();
        for mask in 0u32..(1 << self.n) {
            let inside = |e: u32| mask & (1 << e) != 0;
            let ok = (0..self.n as u32)
                .all(|x| !inside(x) || (0..self.n as u32).all(|y| inside(y) || !breaks(x, y)));
            if ok {
                out.push(
                    (0..self.n as u32)
                        .filter(|&e| inside(e))
                        .map(VertexId)
                        .collect(),
                );
            }
        }
        out
    }
}

impl fmt::Display for FinitePoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "poset on {} elements:", self.n)?;
        for x in 0..self.n as u32 {
            for y in 0..self.n as u32 {
                if self.lt(x, y) {
                    write!(
                        f,
                        " {}<{}",
                        self.labels[x as usize], self.labels[y as usize]
                    )?;
                }
            }
        }
        Ok(())
    }
}

/// Random poset: a shuffled ordering with random compatible pairs, then
/// transitive closure.
pub fn random_poset<R: Rng>(rng: &mut R, n: u32, pair_prob: f64) -> FinitePoset {
    let mut order: Vec<u32> = (0..n).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut pairs = Vec::new();
    for i in 0..order.len() {
        for j in (i + 1)..order.len() {
            if rng.gen_bool(pair_prob) {
                pairs.push((order[i], order[j]));
            }
        }
    }
    FinitePoset::from_covers(n, &pairs).expect("pairs follow a fixed ordering")
}
