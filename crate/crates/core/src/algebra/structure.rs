use std::collections::HashMap;

use super::finite_algebra::format_tuple;
use super::operation::PartialOperation;
use super::relation::{all_tuples, encode, Elem, Relation};
use crate::error::{input, Error, Result};
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    Relation,
    Operation,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub kind: SymbolKind,
    pub arity: usize,
}

impl Symbol {
    pub fn relation(name: impl Into<String>, arity: usize) -> Self {
        Symbol { name: name.into(), kind: SymbolKind::Relation, arity }
    }

    pub fn operation(name: impl Into<String>, arity: usize) -> Self {
        Symbol { name: name.into(), kind: SymbolKind::Operation, arity }
    }
}

/// Relation and partial-operation symbols, in declaration order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    symbols: Vec<Symbol>,
}

impl Signature {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self> {
        let mut seen = HashMap::new();
        for s in &symbols {
            if seen.insert(s.name.clone(), ()).is_some() {
                return input(format!("symbol `{}` declared twice", s.name));
            }
        }
        Ok(Signature { symbols })
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn get(&self, name: &str) -> Option<&Symbol> {
        self.symbols.iter().find(|s| s.name == name)
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn has_nullary_operation(&self) -> bool {
        self.symbols.iter().any(|s| s.kind == SymbolKind::Operation && s.arity == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Interp {
    Relation(Relation),
    Operation(PartialOperation),
}

impl Interp {
    pub fn arity(&self) -> usize {
        match self {
            Interp::Relation(r) => r.arity(),
            Interp::Operation(h) => h.arity(),
        }
    }

    pub fn kind(&self) -> SymbolKind {
        match self {
            Interp::Relation(_) => SymbolKind::Relation,
            Interp::Operation(_) => SymbolKind::Operation,
        }
    }

    /// The tuple set the symbol constrains: the relation, or the graph.
    pub fn as_relation(&self) -> Relation {
        match self {
            Interp::Relation(r) => r.clone(),
            Interp::Operation(h) => h.graph(),
        }
    }
}

/// A finite structure: carrier plus an interpretation for every symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteStructure {
    name: String,
    elements: Vec<String>,
    signature: Signature,
    interps: Vec<Interp>,
}

impl FiniteStructure {
    pub fn new(
        name: impl Into<String>,
        elements: Vec<String>,
        signature: Signature,
        interps: Vec<Interp>,
    ) -> Result<Self> {
        if interps.len() != signature.len() {
            return input("every symbol needs exactly one interpretation");
        }
        for (s, i) in signature.symbols().iter().zip(&interps) {
            if s.kind != i.kind() || s.arity != i.arity() {
                return Err(Error::ArityMismatch { symbol: s.name.clone(), expected: s.arity, found: i.arity() });
            }
            let universe = match i {
                Interp::Relation(r) => r.universe(),
                Interp::Operation(h) => h.universe(),
            };
            if universe != elements.len() {
                return input(format!("interpretation of `{}` lives on another carrier", s.name));
            }
        }
        Ok(FiniteStructure { name: name.into(), elements, signature, interps })
    }

    /// Builds a structure from `(name, interpretation)` pairs.
    pub fn from_symbols(name: impl Into<String>, elements: Vec<String>, symbols: Vec<(String, Interp)>) -> Result<Self> {
        let sig = Signature::new(
            symbols
                .iter()
                .map(|(n, i)| Symbol { name: n.clone(), kind: i.kind(), arity: i.arity() })
                .collect(),
        )?;
        Self::new(name, elements, sig, symbols.into_iter().map(|(_, i)| i).collect())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn element_index(&self, name: &str) -> Option<Elem> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn interps(&self) -> &[Interp] {
        &self.interps
    }

    pub fn interp(&self, name: &str) -> Option<&Interp> {
        self.signature.position(name).map(|i| &self.interps[i])
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        match self.interp(name) {
            Some(Interp::Relation(r)) => Some(r),
            _ => None,
        }
    }

    pub fn operation(&self, name: &str) -> Option<&PartialOperation> {
        match self.interp(name) {
            Some(Interp::Operation(h)) => Some(h),
            _ => None,
        }
    }

    pub fn tuple_name(&self, t: &[Elem]) -> String {
        format_tuple(&self.elements, t)
    }

    /// Keeps only the named symbols, in the given order.
    pub fn reduct(&self, names: &[&str]) -> Result<FiniteStructure> {
        let mut symbols = Vec::new();
        for &n in names {
            let i = self.interp(n).ok_or_else(|| Error::UnknownSymbol(n.to_string()))?;
            symbols.push((n.to_string(), i.clone()));
        }
        Self::from_symbols(self.name.clone(), self.elements.clone(), symbols)
    }

    /// Whether `subset` is closed under every partial operation.
    pub fn is_closed(&self, subset: &[Elem]) -> bool {
        let mut member = vec![false; self.size()];
        for &x in subset {
            member[x] = true;
        }
        self.interps.iter().all(|i| match i {
            Interp::Relation(_) => true,
            Interp::Operation(h) => h
                .domain()
                .tuples()
                .iter()
                .zip(h.values())
                .all(|(t, &v)| !t.iter().all(|&x| member[x]) || member[v]),
        })
    }

    /// The substructure on a closed `subset` (kept in carrier order), or
    /// `None` when `subset` is not closed.
    pub fn induced(&self, subset: &[Elem]) -> Option<FiniteStructure> {
        let mut subset = subset.to_vec();
        subset.sort_unstable();
        subset.dedup();
        if !self.is_closed(&subset) {
            return None;
        }
        let mut pos = vec![usize::MAX; self.size()];
        for (i, &x) in subset.iter().enumerate() {
            pos[x] = i;
        }
        let n = subset.len();
        let inside = |t: &[Elem]| t.iter().all(|&x| pos[x] != usize::MAX);
        let map = |t: &[Elem]| t.iter().map(|&x| pos[x]).collect::<Vec<_>>();
        let interps = self
            .interps
            .iter()
            .map(|i| match i {
                Interp::Relation(r) => Interp::Relation(Relation::from_tuples_unchecked(
                    n,
                    r.arity(),
                    r.tuples().iter().filter(|t| inside(t)).map(|t| map(t)).collect(),
                )),
                Interp::Operation(h) => {
                    let pairs: Vec<(Vec<Elem>, Elem)> = h
                        .domain()
                        .tuples()
                        .iter()
                        .zip(h.values())
                        .filter(|(t, _)| inside(t))
                        .map(|(t, &v)| (map(t), pos[v]))
                        .collect();
                    Interp::Operation(PartialOperation::from_pairs(n, h.arity(), pairs).expect("functional"))
                }
            })
            .collect();
        Some(FiniteStructure {
            name: format!("{}[{}]", self.name, subset.iter().map(|&x| self.elements[x].as_str()).collect::<Vec<_>>().join(",")),
            elements: subset.iter().map(|&x| self.elements[x].clone()).collect(),
            signature: self.signature.clone(),
            interps,
        })
    }

    /// Every closed subset with its substructure, subsets in binary order.
    pub fn substructures(&self) -> Result<Vec<(Vec<Elem>, FiniteStructure)>> {
        let n = self.size();
        if n > 20 {
            return Err(Error::BoundExceeded(format!("{n} elements is too many to enumerate subsets")));
        }
        let masks: Vec<u64> = (0..1u64 << n).collect();
        let found = par::map(&masks, |&mask| {
            let subset: Vec<Elem> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            self.induced(&subset).map(|s| (subset, s))
        });
        Ok(found.into_iter().flatten().collect())
    }

    /// The k-th power, operations and relations coordinatewise.
    pub fn power(&self, k: usize) -> Result<FiniteStructure> {
        if k == 0 {
            return input("only non-zero powers are formed");
        }
        let m = self.size();
        let carrier: Vec<Vec<Elem>> = all_tuples(m, k).collect();
        let n = carrier.len();
        let names = carrier.iter().map(|t| self.tuple_name(t)).collect();
        // an n-ary tuple over X^k is read column by column
        let interps = self
            .interps
            .iter()
            .map(|i| {
                let a = i.arity();
                match i {
                    Interp::Relation(r) => {
                        let ts = power_tuples(r.tuples(), k)
                            .into_iter()
                            .map(|cols| transpose_codes(&cols, a, m))
                            .collect();
                        Interp::Relation(Relation::from_tuples_unchecked(n, a, ts))
                    }
                    Interp::Operation(h) => {
                        let g = h.graph();
                        let pairs = power_tuples(g.tuples(), k)
                            .into_iter()
                            .map(|cols| {
                                let t = transpose_codes(&cols, a + 1, m);
                                (t[..a].to_vec(), t[a])
                            })
                            .collect();
                        Interp::Operation(PartialOperation::from_pairs(n, a, pairs).expect("functional"))
                    }
                }
            })
            .collect();
        Ok(FiniteStructure {
            name: format!("{}^{k}", self.name),
            elements: names,
            signature: self.signature.clone(),
            interps,
        })
    }

    fn check_same_signature(&self, other: &FiniteStructure) -> Result<()> {
        if self.signature != other.signature {
            return Err(Error::SignatureMismatch(format!(
                "`{}` and `{}` have different signatures",
                self.name, other.name
            )));
        }
        Ok(())
    }

    /// Whether `map` (indexed by this carrier) preserves every relation and
    /// partial operation into `other`.
    pub fn is_morphism(&self, map: &[Elem], other: &FiniteStructure) -> bool {
        self.interps.iter().zip(&other.interps).all(|(a, b)| match (a, b) {
            (Interp::Relation(r), Interp::Relation(s)) => r
                .tuples()
                .iter()
                .all(|t| s.contains(&t.iter().map(|&x| map[x]).collect::<Vec<_>>())),
            (Interp::Operation(h), Interp::Operation(k)) => h.domain().tuples().iter().zip(h.values()).all(|(t, &v)| {
                k.apply(&t.iter().map(|&x| map[x]).collect::<Vec<_>>()) == Some(map[v])
            }),
            _ => false,
        })
    }

    /// All morphisms into `other`, as value vectors in lexicographic order.
    pub fn homs_to(&self, other: &FiniteStructure) -> Result<Vec<Vec<Elem>>> {
        self.check_same_signature(other)?;
        let n = self.size();
        // constraints become checkable once their largest element is mapped
        let mut checks: Vec<Vec<Check>> = vec![Vec::new(); n.max(1)];
        let mut nullary_targets: Vec<(Elem, Elem)> = Vec::new();
        for (si, (a, b)) in self.interps.iter().zip(&other.interps).enumerate() {
            match a {
                Interp::Relation(r) => {
                    for t in r.tuples() {
                        match t.iter().max() {
                            Some(&mx) => checks[mx].push(Check { symbol: si, tuple: t.clone(), value: None }),
                            None => {
                                if !b.as_relation().contains(&[]) {
                                    return Ok(Vec::new());
                                }
                            }
                        }
                    }
                }
                Interp::Operation(h) => {
                    for (t, &v) in h.domain().tuples().iter().zip(h.values()) {
                        if t.is_empty() {
                            match b {
                                Interp::Operation(k) => match k.apply(&[]) {
                                    Some(w) => nullary_targets.push((v, w)),
                                    None => return Ok(Vec::new()),
                                },
                                _ => unreachable!(),
                            }
                            continue;
                        }
                        let mx = t.iter().copied().max().unwrap().max(v);
                        checks[mx].push(Check { symbol: si, tuple: t.clone(), value: Some(v) });
                    }
                }
            }
        }
        let mut forced = vec![None; n];
        for (x, w) in nullary_targets {
            match forced[x] {
                Some(u) if u != w => return Ok(Vec::new()),
                _ => forced[x] = Some(w),
            }
        }
        let search = StructureSearch { target: other, checks, forced, n };
        if n == 0 {
            return Ok(vec![Vec::new()]);
        }
        let firsts: Vec<Elem> = match search.forced[0] {
            Some(w) => vec![w],
            None => (0..other.size()).collect(),
        };
        let parts = par::map(&firsts, |&v| {
            let mut out = Vec::new();
            let mut map = vec![v];
            if search.ok(&map, 0) {
                search.dfs(&mut map, &mut out);
            }
            out
        });
        Ok(parts.into_iter().flatten().collect())
    }

    /// Partition of the carrier into connected components of the incidence
    /// graph of relation tuples and operation graphs.
    pub fn components(&self) -> Vec<Vec<Elem>> {
        let n = self.size();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nxt = p[y];
                p[y] = r;
                y = nxt;
            }
            r
        }
        for i in &self.interps {
            for t in i.as_relation().tuples() {
                for w in t.windows(2) {
                    let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                    parent[a] = b;
                }
            }
        }
        let mut groups: HashMap<usize, Vec<Elem>> = HashMap::new();
        for x in 0..n {
            let r = find(&mut parent, x);
            groups.entry(r).or_default().push(x);
        }
        let mut out: Vec<Vec<Elem>> = groups.into_values().collect();
        out.sort();
        out
    }
}

#[derive(Clone)]
struct Check {
    symbol: usize,
    tuple: Vec<Elem>,
    value: Option<Elem>,
}

struct StructureSearch<'a> {
    target: &'a FiniteStructure,
    checks: Vec<Vec<Check>>,
    forced: Vec<Option<Elem>>,
    n: usize,
}

impl StructureSearch<'_> {
    fn ok(&self, map: &[Elem], i: usize) -> bool {
        if let Some(w) = self.forced[i] {
            if map[i] != w {
                return false;
            }
        }
        self.checks[i].iter().all(|c| {
            let img: Vec<Elem> = c.tuple.iter().map(|&x| map[x]).collect();
            match (&self.target.interps[c.symbol], c.value) {
                (Interp::Relation(r), _) => r.contains(&img),
                (Interp::Operation(h), Some(v)) => h.apply(&img) == Some(map[v]),
                _ => false,
            }
        })
    }

    fn dfs(&self, map: &mut Vec<Elem>, out: &mut Vec<Vec<Elem>>) {
        let i = map.len();
        if i == self.n {
            out.push(map.clone());
            return;
        }
        for v in 0..self.target.size() {
            map.push(v);
            if self.ok(map, i) {
                self.dfs(map, out);
            }
            map.pop();
        }
    }
}

/// All k-tuples of tuples from `ts` (rows of the power relation, one per coordinate).
fn power_tuples(ts: &[Vec<Elem>], k: usize) -> Vec<Vec<&[Elem]>> {
    let mut out = Vec::new();
    let n = ts.len();
    super::finite_algebra::for_each_tuple(n, k, |idx| {
        out.push(idx.iter().map(|&i| ts[i].as_slice()).collect());
        true
    });
    out
}

/// Turns k coordinate rows (each of length `a`) into an `a`-tuple of codes in
/// `X^k`.
fn transpose_codes(rows: &[&[Elem]], a: usize, m: usize) -> Vec<Elem> {
    (0..a)
        .map(|p| encode(m, &rows.iter().map(|row| row[p]).collect::<Vec<_>>()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain_structure() -> FiniteStructure {
        // {0, a, b, 1} with the graph of f: 0↦0, a↦b, 1↦1
        let graph = Relation::new(4, 2, vec![vec![0, 0], vec![1, 2], vec![3, 3]]).unwrap();
        FiniteStructure::from_symbols(
            "Q0",
            ["0", "a", "b", "1"].iter().map(|s| s.to_string()).collect(),
            vec![("graph_f".into(), Interp::Relation(graph))],
        )
        .unwrap()
    }

    #[test]
    fn singleton_a_has_four_homs() {
        let q0 = chain_structure();
        let x = q0.induced(&[1]).unwrap();
        assert!(x.relation("graph_f").unwrap().is_empty());
        assert_eq!(x.homs_to(&q0).unwrap().len(), 4);
    }

    #[test]
    fn identity_is_a_morphism() {
        let q0 = chain_structure();
        let homs = q0.homs_to(&q0).unwrap();
        assert!(homs.contains(&vec![0, 1, 2, 3]));
        for h in &homs {
            assert!(q0.is_morphism(h, &q0));
        }
    }

    #[test]
    fn power_sizes() {
        let q0 = chain_structure();
        let sq = q0.power(2).unwrap();
        assert_eq!(sq.size(), 16);
        assert_eq!(sq.relation("graph_f").unwrap().len(), 9);
        assert!(q0.power(0).is_err());
        assert_eq!(q0.power(1).unwrap().interps(), q0.interps());
    }

    #[test]
    fn components_of_square() {
        let sq = chain_structure().power(2).unwrap();
        let comps = sq.components();
        assert_eq!(comps.iter().map(|c| c.len()).sum::<usize>(), 16);
        assert!(comps.iter().all(|c| c.len() <= 2));
    }
}
