//! Breadth-first generation of a partial order from a group identity and
//! length-increasing generator moves. Serves as an oracle, independent of
//! the digraph machinery, for the weak orders the diagram modules encode.

use std::collections::{BTreeSet, HashMap};
use std::hash::Hash;

/// Elements discovered by BFS, grouped by length and sorted within each
/// layer, together with the cover arcs (one length-increasing move).
#[derive(Debug, Clone)]
pub struct GeneratedOrder<E> {
    pub elements: Vec<E>,
    pub index: HashMap<E, usize>,
    pub length: Vec<usize>,
    pub covers_up: Vec<Vec<usize>>,
}

/// `apply(e, s)` multiplies by generator `s`; `lengthens(e, s)` must say
/// whether that move goes up by exactly one rank. With `max_length` the
/// generation stops after the given rank.
pub fn generate<E, FA, FL>(
    identity: E,
    num_gens: usize,
    apply: FA,
    lengthens: FL,
    max_length: Option<usize>,
) -> GeneratedOrder<E>
where
    E: Clone + Eq + Ord + Hash,
    FA: Fn(&E, usize) -> E,
    FL: Fn(&E, usize) -> bool,
{
    let mut elements = vec![identity.clone()];
    let mut index = HashMap::new();
    index.insert(identity, 0usize);
    let mut length = vec![0usize];
    let mut covers_up: Vec<Vec<usize>> = vec![Vec::new()];
    let mut layer = vec![0usize];
    let mut len = 0usize;

    while !layer.is_empty() && max_length.is_none_or(|ml| len < ml) {
        let mut found: BTreeSet<E> = BTreeSet::new();
        let mut arcs: Vec<(usize, E)> = Vec::new();
        for &ei in &layer {
            for s in 0..num_gens {
                if lengthens(&elements[ei], s) {
                    let up = apply(&elements[ei], s);
                    found.insert(up.clone());
                    arcs.push((ei, up));
                }
            }
        }
        let mut next_layer = Vec::with_capacity(found.len());
        for e in found {
            let id = elements.len();
            index.insert(e.clone(), id);
            elements.push(e);
            length.push(len + 1);
            covers_up.push(Vec::new());
            next_layer.push(id);
        }
        for (parent, e) in arcs {
            covers_up[parent].push(index[&e]);
        }
        layer = next_layer;
        len += 1;
    }
    for ups in covers_up.iter_mut() {
        ups.sort_unstable();
        ups.dedup();
    }

    GeneratedOrder {
        elements,
        index,
        length,
        covers_up,
    }
}

impl<E> GeneratedOrder<E> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn count_by_length(&self) -> Vec<usize> {
        let max = self.length.iter().copied().max().unwrap_or(0);
        let mut counts = vec![0usize; max + 1];
        for &l in &self.length {
            counts[l] += 1;
        }
        counts
    }

    /// Full order relation as a dense matrix: `le[i][j]` iff j is reachable
    /// from i along cover arcs.
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        let n = self.elements.len();
        let mut le = vec![vec![false; n]; n];
        for i in (0..n).rev() {
            le[i][i] = true;
            for &j in &self.covers_up[i] {
                let row = le[j].clone();
                for (cell, up) in le[i].iter_mut().zip(row) {
                    *cell |= up;
                }
            }
        }
        le
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Boolean cube: generators flip bits 0..n, lengthening when unset.
    #[test]
    fn generates_boolean_cube() {
        let ord = generate(
            0u8,
            3,
            |&e, s| e ^ (1 << s),
            |&e, s| e & (1 << s) == 0,
            None,
        );
        assert_eq!(ord.len(), 8);
        assert_eq!(ord.count_by_length(), vec![1, 3, 3, 1]);
        let le = ord.reachability();
        for (i, &x) in ord.elements.iter().enumerate() {
            for (j, &y) in ord.elements.iter().enumerate() {
                assert_eq!(le[i][j], x & y == x, "bitmask order mismatch at {x},{y}");
            }
        }
    }

    #[test]
    fn respects_max_length() {
        let ord = generate(
            0u8,
            3,
            |&e, s| e ^ (1 << s),
            |&e, s| e & (1 << s) == 0,
            Some(1),
        );
        assert_eq!(ord.len(), 4);
        assert_eq!(ord.count_by_length(), vec![1, 3]);
    }
}
