use super::relation::{encode, power_size, Elem, Relation};
use crate::error::{input, Result};

const DENSE_LIMIT: usize = 1 << 20;
const UNDEF: u32 = u32::MAX;

/// A partial n-ary operation: a value for each tuple of `domain`, nothing
/// elsewhere. `values[i]` belongs to `domain.tuple(i)`.
#[derive(Clone, Debug)]
pub struct PartialOperation {
    domain: Relation,
    values: Vec<Elem>,
    dense: Option<Vec<u32>>,
}

impl PartialEq for PartialOperation {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.values == other.values
    }
}

impl Eq for PartialOperation {}

impl std::hash::Hash for PartialOperation {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.domain.hash(state);
        self.values.hash(state);
    }
}

impl PartialOperation {
    /// Builds an operation from a domain and values aligned with the domain's
    /// canonical tuple order.
    pub fn new(domain: Relation, values: Vec<Elem>) -> Result<Self> {
        if values.len() != domain.len() {
            return input(format!(
                "{} values for a domain of {} tuples",
                values.len(),
                domain.len()
            ));
        }
        if let Some(&bad) = values.iter().find(|&&v| v >= domain.universe()) {
            return input(format!("value index {bad} outside the carrier"));
        }
        Ok(Self::new_unchecked(domain, values))
    }

    pub(crate) fn new_unchecked(domain: Relation, values: Vec<Elem>) -> Self {
        let n = domain.universe();
        let dense = power_size(n, domain.arity()).filter(|&s| s <= DENSE_LIMIT).map(|s| {
            let mut d = vec![UNDEF; s];
            for (t, &v) in domain.tuples().iter().zip(&values) {
                d[encode(n, t)] = v as u32;
            }
            d
        });
        PartialOperation { domain, values, dense }
    }

    /// Builds an operation from `(argument tuple, value)` pairs.
    pub fn from_pairs(universe: usize, arity: usize, pairs: Vec<(Vec<Elem>, Elem)>) -> Result<Self> {
        let mut pairs = pairs;
        pairs.sort();
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 != w[1].1 {
                return input("operation assigns two values to one tuple");
            }
        }
        pairs.dedup();
        let domain = Relation::new(universe, arity, pairs.iter().map(|p| p.0.clone()))?;
        let values = pairs.into_iter().map(|p| p.1).collect();
        Self::new(domain, values)
    }

    /// Reads an operation off its graph; the last coordinate is the value.
    pub fn from_graph(graph: &Relation) -> Result<Self> {
        if graph.arity() == 0 {
            return input("a graph has arity at least 1");
        }
        let n = graph.arity() - 1;
        let pairs = graph.tuples().iter().map(|t| (t[..n].to_vec(), t[n])).collect();
        Self::from_pairs(graph.universe(), n, pairs)
    }

    pub fn arity(&self) -> usize {
        self.domain.arity()
    }

    pub fn universe(&self) -> usize {
        self.domain.universe()
    }

    pub fn domain(&self) -> &Relation {
        &self.domain
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    pub fn apply(&self, args: &[Elem]) -> Option<Elem> {
        match &self.dense {
            Some(d) => {
                if args.len() != self.arity() || args.iter().any(|&x| x >= self.universe()) {
                    return None;
                }
                let v = d[encode(self.universe(), args)];
                (v != UNDEF).then_some(v as Elem)
            }
            None => self.domain.index_of(args).map(|i| self.values[i]),
        }
    }

    /// `{(ā, h(ā)) : ā ∈ dom h}`.
    pub fn graph(&self) -> Relation {
        let ts = self
            .domain
            .tuples()
            .iter()
            .zip(&self.values)
            .map(|(t, &v)| {
                let mut g = t.clone();
                g.push(v);
                g
            })
            .collect();
        Relation::from_tuples_unchecked(self.universe(), self.arity() + 1, ts)
    }

    /// The coordinates `i` with `h(ā) = a_i` for every `ā ∈ dom h`.
    pub fn projection_indices(&self) -> Vec<usize> {
        (0..self.arity())
            .filter(|&i| self.domain.tuples().iter().zip(&self.values).all(|(t, &v)| t[i] == v))
            .collect()
    }

    pub fn is_projection_restriction(&self) -> bool {
        !self.projection_indices().is_empty()
    }

    /// Whether `other` is defined on all of `dom self` and agrees there.
    pub fn is_extended_by(&self, other: &PartialOperation) -> bool {
        self.arity() == other.arity()
            && self
                .domain
                .tuples()
                .iter()
                .zip(&self.values)
                .all(|(t, &v)| other.apply(t) == Some(v))
    }

    /// Restriction to the tuples of `dom self` lying in `r`.
    pub fn restrict(&self, r: &Relation) -> PartialOperation {
        let (ts, vs): (Vec<_>, Vec<_>) = self
            .domain
            .tuples()
            .iter()
            .zip(&self.values)
            .filter(|(t, _)| r.contains(t))
            .map(|(t, &v)| (t.clone(), v))
            .unzip();
        PartialOperation::new_unchecked(
            Relation::from_tuples_unchecked(self.universe(), self.arity(), ts),
            vs,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma() -> PartialOperation {
        PartialOperation::from_pairs(3, 2, vec![(vec![0, 0], 0), (vec![0, 2], 1), (vec![2, 2], 2)]).unwrap()
    }

    #[test]
    fn apply_and_graph() {
        let s = sigma();
        assert_eq!(s.apply(&[0, 2]), Some(1));
        assert_eq!(s.apply(&[2, 0]), None);
        assert_eq!(s.graph().tuples(), &[vec![0, 0, 0], vec![0, 2, 1], vec![2, 2, 2]]);
        assert_eq!(PartialOperation::from_graph(&s.graph()).unwrap(), s);
    }

    #[test]
    fn conflicting_pairs_rejected() {
        assert!(PartialOperation::from_pairs(3, 1, vec![(vec![0], 0), (vec![0], 1)]).is_err());
    }

    #[test]
    fn projection_detection() {
        let id_on_01 = PartialOperation::from_pairs(3, 2, vec![(vec![0, 0], 0), (vec![2, 2], 2)]).unwrap();
        assert_eq!(id_on_01.projection_indices(), vec![0, 1]);
        assert!(!sigma().is_projection_restriction());
    }
}
