use std::collections::HashSet;

use crate::error::{input, Result};

/// Index of an element in its carrier's declaration order.
pub type Elem = usize;

/// Largest `|M|^n` for which a membership bitset is kept alongside the tuples.
const BITSET_LIMIT: usize = 1 << 24;

/// A finite n-ary relation on a carrier of `universe` elements. Tuples are kept
/// sorted lexicographically and free of duplicates.
#[derive(Clone, Debug)]
pub struct Relation {
    universe: usize,
    arity: usize,
    tuples: Vec<Vec<Elem>>,
    bits: Option<Vec<u64>>,
}

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe && self.arity == other.arity && self.tuples == other.tuples
    }
}

impl Eq for Relation {}

impl std::hash::Hash for Relation {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.universe.hash(state);
        self.arity.hash(state);
        self.tuples.hash(state);
    }
}

impl PartialOrd for Relation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Relation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.universe, self.arity, &self.tuples).cmp(&(other.universe, other.arity, &other.tuples))
    }
}

/// `universe^arity`, or `None` on overflow.
pub fn power_size(universe: usize, arity: usize) -> Option<usize> {
    let mut n: usize = 1;
    for _ in 0..arity {
        n = n.checked_mul(universe)?;
    }
    Some(n)
}

/// Position of `t` in the lexicographic enumeration of `universe^t.len()`.
pub fn encode(universe: usize, t: &[Elem]) -> usize {
    t.iter().fold(0, |acc, &x| acc * universe + x)
}

/// Inverse of [`encode`].
pub fn decode(universe: usize, arity: usize, mut code: usize) -> Vec<Elem> {
    let mut t = vec![0; arity];
    for slot in t.iter_mut().rev() {
        *slot = code % universe.max(1);
        code /= universe.max(1);
    }
    t
}

/// Iterates `universe^arity` in lexicographic order.
pub fn all_tuples(universe: usize, arity: usize) -> impl Iterator<Item = Vec<Elem>> {
    let total = if universe == 0 && arity > 0 {
        0
    } else {
        power_size(universe, arity).unwrap_or(usize::MAX)
    };
    (0..total).map(move |c| decode(universe, arity, c))
}

impl Relation {
    /// Builds a relation, validating tuple shape and sorting.
    pub fn new<I>(universe: usize, arity: usize, tuples: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<Elem>>,
    {
        let mut ts: Vec<Vec<Elem>> = Vec::new();
        for t in tuples {
            if t.len() != arity {
                return input(format!("tuple of length {} in a relation of arity {arity}", t.len()));
            }
            if let Some(&bad) = t.iter().find(|&&x| x >= universe) {
                return input(format!("element index {bad} outside a carrier of size {universe}"));
            }
            ts.push(t);
        }
        Ok(Self::from_tuples_unchecked(universe, arity, ts))
    }

    pub(crate) fn from_tuples_unchecked(universe: usize, arity: usize, mut tuples: Vec<Vec<Elem>>) -> Self {
        tuples.sort_unstable();
        tuples.dedup();
        let bits = power_size(universe, arity).filter(|&n| n <= BITSET_LIMIT).map(|n| {
            let mut b = vec![0u64; n.div_ceil(64).max(1)];
            for t in &tuples {
                let c = encode(universe, t);
                b[c / 64] |= 1 << (c % 64);
            }
            b
        });
        Relation { universe, arity, tuples, bits }
    }

    pub fn empty(universe: usize, arity: usize) -> Self {
        Self::from_tuples_unchecked(universe, arity, Vec::new())
    }

    /// The full relation `M^arity`.
    pub fn full(universe: usize, arity: usize) -> Self {
        Self::from_tuples_unchecked(universe, arity, all_tuples(universe, arity).collect())
    }

    /// The unary relation given by a set of elements.
    pub fn unary(universe: usize, elems: impl IntoIterator<Item = Elem>) -> Result<Self> {
        Self::new(universe, 1, elems.into_iter().map(|x| vec![x]))
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> &[Vec<Elem>] {
        &self.tuples
    }

    pub fn tuple(&self, i: usize) -> &[Elem] {
        &self.tuples[i]
    }

    pub fn contains(&self, t: &[Elem]) -> bool {
        if t.len() != self.arity || t.iter().any(|&x| x >= self.universe) {
            return false;
        }
        match &self.bits {
            Some(b) => {
                let c = encode(self.universe, t);
                b[c / 64] >> (c % 64) & 1 == 1
            }
            None => self.tuples.binary_search_by(|u| u.as_slice().cmp(t)).is_ok(),
        }
    }

    /// Position of `t` in the canonical tuple order.
    pub fn index_of(&self, t: &[Elem]) -> Option<usize> {
        self.tuples.binary_search_by(|u| u.as_slice().cmp(t)).ok()
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.arity == other.arity && self.tuples.iter().all(|t| other.contains(t))
    }

    pub fn intersect(&self, other: &Relation) -> Relation {
        debug_assert_eq!(self.arity, other.arity);
        let ts = self.tuples.iter().filter(|t| other.contains(t)).cloned().collect();
        Self::from_tuples_unchecked(self.universe, self.arity, ts)
    }

    /// Image under `t ↦ (t[coords[0]], t[coords[1]], ...)`.
    pub fn project(&self, coords: &[usize]) -> Relation {
        let ts = self.tuples.iter().map(|t| coords.iter().map(|&c| t[c]).collect()).collect();
        Self::from_tuples_unchecked(self.universe, coords.len(), ts)
    }

    /// Whether the projection onto `coords` is injective on this relation.
    pub fn projection_is_injective(&self, coords: &[usize]) -> bool {
        let mut seen = HashSet::with_capacity(self.len());
        self.tuples
            .iter()
            .all(|t| seen.insert(coords.iter().map(|&c| t[c]).collect::<Vec<_>>()))
    }

    /// Column `i` as a vector aligned with the canonical tuple order.
    pub fn column(&self, i: usize) -> Vec<Elem> {
        self.tuples.iter().map(|t| t[i]).collect()
    }
}

/// Finds coordinates `θ` such that `ā ↦ (a_θ(1), …, a_θ(k))` maps `s`
/// bijectively onto `r`. Coordinates are chosen per position in increasing
/// order and a partial choice is abandoned as soon as its image leaves the
/// projection of `r`.
pub fn bijective_projection(r: &Relation, s: &Relation) -> Option<Vec<usize>> {
    if r.universe() != s.universe() || r.len() != s.len() {
        return None;
    }
    let k = r.arity();
    let l = s.arity();
    let mut theta = Vec::with_capacity(k);
    fn go(r: &Relation, s: &Relation, l: usize, theta: &mut Vec<usize>) -> bool {
        let depth = theta.len();
        if depth == r.arity() {
            return s.project(theta) == *r;
        }
        for c in 0..l {
            theta.push(c);
            let prefix: Vec<usize> = (0..=depth).collect();
            if s.project(theta) == r.project(&prefix) && go(r, s, l, theta) {
                return true;
            }
            theta.pop();
        }
        false
    }
    if go(r, s, l, &mut theta) {
        Some(theta)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_and_deduplicated() {
        let r = Relation::new(3, 2, vec![vec![2, 1], vec![0, 0], vec![2, 1]]).unwrap();
        assert_eq!(r.tuples(), &[vec![0, 0], vec![2, 1]]);
        assert!(r.contains(&[2, 1]));
        assert!(!r.contains(&[1, 2]));
        assert_eq!(r.index_of(&[2, 1]), Some(1));
    }

    #[test]
    fn rejects_bad_tuples() {
        assert!(Relation::new(3, 2, vec![vec![0]]).is_err());
        assert!(Relation::new(3, 1, vec![vec![3]]).is_err());
    }

    #[test]
    fn nullary_relations() {
        let e = Relation::empty(3, 0);
        let one = Relation::full(3, 0);
        assert!(e.is_empty());
        assert_eq!(one.len(), 1);
        assert!(one.contains(&[]));
        assert!(!e.contains(&[]));
    }

    #[test]
    fn encode_round_trip() {
        for c in 0..27 {
            assert_eq!(encode(3, &decode(3, 3, c)), c);
        }
        assert_eq!(all_tuples(3, 2).count(), 9);
        assert_eq!(all_tuples(0, 0).count(), 1);
        assert_eq!(all_tuples(0, 2).count(), 0);
    }

    #[test]
    fn bijective_projection_drops_graph_column() {
        // dom h and graph h on {0, a, 1}
        let dom = Relation::new(3, 2, vec![vec![0, 0], vec![0, 1], vec![1, 2], vec![2, 2]]).unwrap();
        let graph = Relation::new(
            3,
            3,
            vec![vec![0, 0, 0], vec![0, 1, 1], vec![1, 2, 1], vec![2, 2, 2]],
        )
        .unwrap();
        assert_eq!(bijective_projection(&dom, &graph), Some(vec![0, 1]));
        assert_eq!(bijective_projection(&dom, &dom), Some(vec![0, 1]));
        assert_eq!(bijective_projection(&graph, &dom), None);
    }
}
