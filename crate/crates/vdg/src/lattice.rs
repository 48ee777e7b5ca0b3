//! The family of initial sections ordered by inclusion: a graded complete
//! meet semi-lattice (a complete lattice when the digraph is finite), built
//! layer by layer, plus its Moebius function and chain counts.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::digraph::{InitialSection, ValuedDigraph, VertexSet};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("element cap {cap} exceeded during lattice construction")]
    CapExceeded { cap: usize },
    #[error("no common upper bound is materialized; the lattice is truncated")]
    JoinUnavailable,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BuildOptions {
    /// Stop after this rank; the result is marked incomplete if anything
    /// above was cut off.
    pub max_rank: Option<usize>,
    /// Hard cap on the number of materialized elements.
    pub max_elements: Option<usize>,
}

impl BuildOptions {
    pub fn up_to_rank(rank: usize) -> Self {
        BuildOptions {
            max_rank: Some(rank),
            max_elements: None,
        }
    }
}

/// Initial sections of one digraph, grouped by rank (= cardinality) and
/// ordered by inclusion. Element indices are stable: ascending rank, then
/// ascending vertex-set order within a rank.
#[derive(Debug, Clone)]
pub struct SectionLattice {
    elements: Vec<InitialSection>,
    index: HashMap<VertexSet, usize>,
    covers_up: Vec<Vec<usize>>,
    covers_down: Vec<Vec<usize>>,
    rank_start: Vec<usize>,
    complete: bool,
}

pub fn build(g: &ValuedDigraph, opts: &BuildOptions) -> Result<SectionLattice, LatticeError> {
    let mut elements = vec![InitialSection::empty()];
    let mut index = HashMap::new();
    index.insert(VertexSet::empty(), 0usize);
    let mut covers_up: Vec<Vec<usize>> = vec![Vec::new()];
    let mut rank_start = vec![0usize];
    let mut layer: Vec<usize> = vec![0];
    let mut rank = 0usize;
    let mut complete = true;

    loop {
        // All one-vertex extensions of the current layer. Extensions are
        // exactly the erasable vertices of each element's residual.
        let mut next_sets: BTreeSet<VertexSet> = BTreeSet::new();
        let mut arcs: Vec<(usize, VertexSet)> = Vec::new();
        for &ei in &layer {
            let r = g
                .residual(elements[ei].members())
                .expect("materialized elements are initial sections");
            for x in r.erasable_vertices() {
                let bigger = elements[ei].members().with(x);
                next_sets.insert(bigger.clone());
                arcs.push((ei, bigger));
            }
        }
        if next_sets.is_empty() {
            break;
        }
        if opts.max_rank.is_some_and(|mr| rank >= mr) {
            complete = false;
            break;
        }
        if let Some(cap) = opts.max_elements {
            if elements.len() + next_sets.len() > cap {
                return Err(LatticeError::CapExceeded { cap });
            }
        }
        rank_start.push(elements.len());
        for set in next_sets {
            index.insert(set.clone(), elements.len());
            elements.push(InitialSection::from_checked(set));
            covers_up.push(Vec::new());
        }
        for (parent, set) in arcs {
            let child = index[&set];
            covers_up[parent].push(child);
        }
        layer = (rank_start[rank + 1]..elements.len()).collect();
        rank += 1;
    }
    rank_start.push(elements.len());

    let mut covers_down = vec![Vec::new(); elements.len()];
    for (parent, ups) in covers_up.iter_mut().enumerate() {
        ups.sort_unstable();
        for &child in ups.iter() {
            covers_down[child].push(parent);
        }
    }
    for downs in &mut covers_down {
        downs.sort_unstable();
    }

    Ok(SectionLattice {
        elements,
        index,
        covers_up,
        covers_down,
        rank_start,
        complete,
    })
}

impl SectionLattice {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the empty section is always present
    }

    /// True when every initial section of the digraph is materialized.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn elements(&self) -> &[InitialSection] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &InitialSection {
        &self.elements[i]
    }

    pub fn index_of(&self, members: &VertexSet) -> Option<usize> {
        self.index.get(members).copied()
    }

    pub fn rank_of(&self, i: usize) -> usize {
        self.elements[i].len()
    }

    /// Number of materialized ranks (top rank + 1).
    pub fn rank_count(&self) -> usize {
        self.rank_start.len() - 1
    }

    pub fn rank_indices(&self, rank: usize) -> std::ops::Range<usize> {
        self.rank_start[rank]..self.rank_start[rank + 1]
    }

    pub fn rank_sizes(&self) -> Vec<usize> {
        (0..self.rank_count())
            .map(|r| self.rank_indices(r).len())
            .collect()
    }

    pub fn covers_up(&self, i: usize) -> &[usize] {
        &self.covers_up[i]
    }

    pub fn covers_down(&self, i: usize) -> &[usize] {
        &self.covers_down[i]
    }

    /// Inclusion order between materialized elements.
    pub fn le(&self, i: usize, j: usize) -> bool {
        self.elements[i]
            .members()
            .is_subset(self.elements[j].members())
    }

    /// Greatest element; present exactly when the lattice is complete.
    pub fn top(&self) -> Option<usize> {
        if self.complete {
            Some(self.elements.len() - 1)
        } else {
            None
        }
    }

    /// Hasse diagram in DOT form, one rank per layer.
    pub fn to_dot(&self, g: &ValuedDigraph, name: &str) -> String {
        let mut s = String::new();
        s.push_str(&format!("digraph \"{name}\" {{\n"));
        s.push_str("  rankdir=BT;\n  node [shape=box];\n");
        for (i, e) in self.elements.iter().enumerate() {
            s.push_str(&format!("  e{} [label=\"{}\"];\n", i, element_label(g, e)));
        }
        for r in 0..self.rank_count() {
            s.push_str("  { rank=same;");
            for i in self.rank_indices(r) {
                s.push_str(&format!(" e{i};"));
            }
            s.push_str(" }\n");
        }
        for (i, ups) in self.covers_up.iter().enumerate() {
            for &j in ups {
                s.push_str(&format!("  e{i} -> e{j};\n"));
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn dump(&self, g: &ValuedDigraph) -> LatticeDump {
        let elements = self
            .elements
            .iter()
            .map(|e| ElementDump {
                rank: e.len(),
                vertices: e.iter().map(|v| v.0).collect(),
                label: element_label(g, e),
            })
            .collect();
        let mut covers = Vec::new();
        for (i, ups) in self.covers_up.iter().enumerate() {
            for &j in ups {
                covers.push([i, j]);
            }
        }
        let moebius = self.elements.iter().map(|e| moebius(g, e)).collect();
        LatticeDump {
            complete: self.complete,
            elements,
            covers,
            moebius,
        }
    }
}

fn element_label(g: &ValuedDigraph, e: &InitialSection) -> String {
    let mut s = String::from("{");
    for (i, v) in e.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(g.label(v));
    }
    s.push('}');
    s
}

#[derive(Debug, Clone, Serialize)]
pub struct LatticeDump {
    pub complete: bool,
    pub elements: Vec<ElementDump>,
    pub covers: Vec<[usize; 2]>,
    pub moebius: Vec<i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ElementDump {
    pub rank: usize,
    pub vertices: Vec<u32>,
    pub label: String,
}

/// Infimum of a nonempty family, by direct construction: intersect the
/// members, then peel whatever of the intersection can be reached. The
/// result does not depend on peeling order.
pub fn meet(g: &ValuedDigraph, sections: &[InitialSection]) -> InitialSection {
    assert!(!sections.is_empty(), "meet of an empty family");
    let mut x = sections[0].members().clone();
    for s in &sections[1..] {
        x = x.intersection(s.members());
    }
    let mut r = g.clone();
    let mut c = VertexSet::empty();
    loop {
        let pick = x
            .iter()
            .filter(|&v| !c.contains(v))
            .find(|&v| r.is_erasable(v));
        match pick {
            Some(v) => {
                r.peel_in_place(v);
                c.insert(v);
            }
            None => break,
        }
    }
    InitialSection::from_checked(c)
}

/// Supremum of a nonempty family: the meet of all materialized common
/// upper bounds. Fails when the lattice is truncated below every common
/// upper bound, rather than returning a wrong join.
pub fn join(
    g: &ValuedDigraph,
    lattice: &SectionLattice,
    sections: &[InitialSection],
) -> Result<InitialSection, LatticeError> {
    assert!(!sections.is_empty(), "join of an empty family");
    let ubs: Vec<InitialSection> = lattice
        .elements()
        .iter()
        .filter(|e| sections.iter().all(|s| s.members().is_subset(e.members())))
        .cloned()
        .collect();
    if ubs.is_empty() {
        return Err(LatticeError::JoinUnavailable);
    }
    Ok(meet(g, &ubs))
}

/// The two vertex sets deciding the Moebius value of `[empty, a]`:
/// members with value zero, and members whose removal stays a section.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoebiusWitness {
    pub zero_valued: VertexSet,
    pub removable: VertexSet,
}

impl MoebiusWitness {
    pub fn value(&self) -> i64 {
        if self.zero_valued == self.removable {
            if self.zero_valued.len().is_multiple_of(2) {
                1
            } else {
                -1
            }
        } else {
            0
        }
    }
}

pub fn moebius_witness(g: &ValuedDigraph, a: &InitialSection) -> MoebiusWitness {
    let zero_valued = a.iter().filter(|&x| g.theta(x) == 0).collect();
    let removable = a
        .iter()
        .filter(|&x| g.is_initial_section(&a.members().without(x)))
        .collect();
    MoebiusWitness {
        zero_valued,
        removable,
    }
}

/// Moebius value of the interval from the empty section to `a`, in closed
/// form; always 0 or +-1.
pub fn moebius(g: &ValuedDigraph, a: &InitialSection) -> i64 {
    moebius_witness(g, a).value()
}

/// Moebius value of a general couple `lower <= upper`, computed by
/// re-rooting: peel `lower`, evaluate the closed form in the residual.
pub fn moebius_interval(g: &ValuedDigraph, lower: &InitialSection, upper: &InitialSection) -> i64 {
    assert!(
        lower.members().is_subset(upper.members()),
        "moebius_interval requires lower <= upper"
    );
    let r = g
        .residual(lower.members())
        .expect("lower bound is an initial section");
    let diff = upper.members().difference(lower.members());
    let section =
        InitialSection::new(&r, diff).expect("difference of nested sections peels in the residual");
    moebius(&r, &section)
}

/// Reference implementation from the defining recursion
/// `sum over lower <= c <= upper of mu(lower, c) = [lower == upper]`,
/// evaluated over the explicitly enumerated interval.
pub fn moebius_recursive(g: &ValuedDigraph, lower: &InitialSection, upper: &InitialSection) -> i64 {
    assert!(
        lower.members().is_subset(upper.members()),
        "moebius_recursive requires lower <= upper"
    );
    let interval = enumerate_interval(g, lower, upper);
    let mut mu: BTreeMap<&VertexSet, i64> = BTreeMap::new();
    for c in &interval {
        // interval is sorted by rank, so strictly smaller sets are done
        let below: i64 = mu
            .iter()
            .filter(|(d, _)| d.len() < c.len() && d.is_subset(c))
            .map(|(_, v)| v)
            .sum();
        mu.insert(c, if c == lower.members() { 1 } else { -below });
    }
    mu[upper.members()]
}

/// Every initial section between `lower` and `upper`, ascending by rank.
fn enumerate_interval(
    g: &ValuedDigraph,
    lower: &InitialSection,
    upper: &InitialSection,
) -> Vec<VertexSet> {
    let mut seen = BTreeSet::new();
    seen.insert(lower.members().clone());
    let mut layer = vec![lower.members().clone()];
    let mut out = vec![lower.members().clone()];
    while !layer.is_empty() {
        let mut next = BTreeSet::new();
        for c in &layer {
            let r = g.residual(c).expect("interval elements are sections");
            for x in r.erasable_vertices() {
                if upper.contains(x) {
                    let bigger = c.with(x);
                    if !seen.contains(&bigger) {
                        next.insert(bigger);
                    }
                }
            }
        }
        layer = next.into_iter().collect();
        for c in &layer {
            seen.insert(c.clone());
            out.push(c.clone());
        }
    }
    out
}

/// Number of maximal chains of `[empty, a]`, i.e. of peeling orders of `a`.
/// Counted by peeling from the top: every last-removed vertex must leave a
/// section behind.
pub fn maximal_chain_count(g: &ValuedDigraph, a: &InitialSection) -> BigUint {
    let mut memo: HashMap<VertexSet, BigUint> = HashMap::new();
    count_chains(g, a.members(), &mut memo)
}

fn count_chains(
    g: &ValuedDigraph,
    s: &VertexSet,
    memo: &mut HashMap<VertexSet, BigUint>,
) -> BigUint {
    if s.is_empty() {
        return BigUint::from(1u8);
    }
    if let Some(c) = memo.get(s) {
        return c.clone();
    }
    let mut total = BigUint::from(0u8);
    for v in s.iter() {
        let smaller = s.without(v);
        if g.is_initial_section(&smaller) {
            total += count_chains(g, &smaller, memo);
        }
    }
    memo.insert(s.clone(), total.clone());
    total
}
