use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use super::operation::PartialOperation;
use super::relation::{decode, encode, power_size, Elem, Relation};
use crate::error::{input, Error, Result};
use crate::par;

/// A named total operation with a dense table over `M^arity`, first argument
/// most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Operation {
    pub name: String,
    pub arity: usize,
    pub table: Vec<Elem>,
}

/// An operation given as a closure, for `FiniteAlgebra::from_fns`.
pub type OpFn = Box<dyn Fn(&[Elem]) -> Elem>;

/// A finite algebra: a carrier of named elements and total operations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    name: String,
    elements: Vec<String>,
    ops: Vec<Operation>,
}

impl FiniteAlgebra {
    pub fn new(name: impl Into<String>, elements: Vec<String>, ops: Vec<Operation>) -> Result<Self> {
        let n = elements.len();
        let mut seen = HashSet::new();
        for e in &elements {
            if !seen.insert(e) {
                return input(format!("element `{e}` declared twice"));
            }
        }
        let mut names = HashSet::new();
        for op in &ops {
            if !names.insert(&op.name) {
                return input(format!("operation `{}` declared twice", op.name));
            }
            let size = power_size(n, op.arity)
                .ok_or_else(|| Error::Input(format!("operation `{}` is too large", op.name)))?;
            if op.table.len() != size {
                return input(format!(
                    "operation `{}` has {} table entries, expected {size}",
                    op.name,
                    op.table.len()
                ));
            }
            if op.table.iter().any(|&v| v >= n) {
                return input(format!("operation `{}` takes a value outside the carrier", op.name));
            }
        }
        Ok(FiniteAlgebra { name: name.into(), elements, ops })
    }

    /// Builds an algebra whose operations are given as closures.
    pub fn from_fns(name: impl Into<String>, elements: &[&str], ops: Vec<(&str, usize, OpFn)>) -> Result<Self> {
        let n = elements.len();
        let ops = ops
            .into_iter()
            .map(|(name, arity, f)| Operation {
                name: name.to_string(),
                arity,
                table: super::relation::all_tuples(n, arity).map(|t| f(&t)).collect(),
            })
            .collect();
        Self::new(name, elements.iter().map(|s| s.to_string()).collect(), ops)
    }

    pub fn name(&self) -> &str {
        &self.name
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

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    pub fn op(&self, name: &str) -> Option<&Operation> {
        self.ops.iter().find(|o| o.name == name)
    }

    pub fn apply(&self, op: usize, args: &[Elem]) -> Elem {
        self.ops[op].table[encode(self.size(), args)]
    }

    /// Applies `op` coordinatewise to tuples of equal length.
    pub fn apply_tuples(&self, op: usize, args: &[&[Elem]], len: usize) -> Vec<Elem> {
        let mut buf = vec![0; args.len()];
        (0..len)
            .map(|c| {
                for (b, a) in buf.iter_mut().zip(args) {
                    *b = a[c];
                }
                self.apply(op, &buf)
            })
            .collect()
    }

    fn check_carrier(&self, r: &Relation) -> Result<()> {
        if r.universe() != self.size() {
            return input(format!(
                "relation over a carrier of size {} used with `{}` of size {}",
                r.universe(),
                self.name,
                self.size()
            ));
        }
        Ok(())
    }

    /// Whether `r` is closed under every operation applied coordinatewise.
    pub fn is_subuniverse(&self, r: &Relation) -> Result<bool> {
        self.check_carrier(r)?;
        let n = r.arity();
        for (oi, op) in self.ops.iter().enumerate() {
            let k = op.arity;
            let mut ok = true;
            for_each_tuple(r.len(), k, |idx| {
                let args: Vec<&[Elem]> = idx.iter().map(|&i| r.tuple(i)).collect();
                if !r.contains(&self.apply_tuples(oi, &args, n)) {
                    ok = false;
                }
                ok
            });
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Least subuniverse of `M^n` containing `generators`.
    pub fn subuniverse_closure(&self, n: usize, generators: &[Vec<Elem>]) -> Result<Relation> {
        let gens = Relation::new(self.size(), n, generators.iter().cloned())?;
        let p = PowerAlgebra::new(self, n)?;
        let codes: Vec<usize> = gens.tuples().iter().map(|t| encode(self.size(), t)).collect();
        let set = p.close(&p.bottom(), &codes);
        Ok(p.relation(&set))
    }

    /// All subuniverses of `M^n`, the empty one included when it exists, in
    /// canonical relation order.
    /// Memoised per algebra and arity for the life of the process.
    pub fn subuniverses(&self, n: usize) -> Result<Vec<Relation>> {
        type Cache = Mutex<HashMap<(FiniteAlgebra, usize), Arc<Vec<Relation>>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let key = (self.clone(), n);
        if let Some(hit) = cache.lock().unwrap().get(&key) {
            return Ok(hit.as_ref().clone());
        }
        let p = PowerAlgebra::new(self, n)?;
        let mut rels: Vec<Relation> = p.all_closed_sets().iter().map(|s| p.relation(s)).collect();
        rels.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        cache.lock().unwrap().insert(key, Arc::new(rels.clone()));
        Ok(rels)
    }

    /// The subalgebra of `M^n` on `r`, elements named by their tuples.
    pub fn subalgebra(&self, r: &Relation) -> Result<FiniteAlgebra> {
        if !self.is_subuniverse(r)? {
            return input("relation is not a subuniverse");
        }
        if r.is_empty() {
            return input("the empty relation carries no algebra");
        }
        let names = r.tuples().iter().map(|t| self.tuple_name(t)).collect();
        let ops = self
            .ops
            .iter()
            .enumerate()
            .map(|(oi, op)| {
                let table = super::relation::all_tuples(r.len(), op.arity)
                    .map(|idx| {
                        let args: Vec<&[Elem]> = idx.iter().map(|&i| r.tuple(i)).collect();
                        r.index_of(&self.apply_tuples(oi, &args, r.arity())).expect("closed")
                    })
                    .collect();
                Operation { name: op.name.clone(), arity: op.arity, table }
            })
            .collect();
        FiniteAlgebra::new(format!("{}^{}", self.name, r.arity()), names, ops)
    }

    /// `M^n` as an algebra.
    pub fn power(&self, n: usize) -> Result<FiniteAlgebra> {
        self.subalgebra(&Relation::full(self.size(), n))
    }

    /// Compact rendering of a tuple: juxtaposed when every element name is a
    /// single character, otherwise parenthesised.
    pub fn tuple_name(&self, t: &[Elem]) -> String {
        format_tuple(&self.elements, t)
    }

    /// All homomorphisms `r → M` for a subuniverse `r`, as partial operations
    /// with domain `r`, sorted by value vector over `r`'s tuple order.
    pub fn hom_set(&self, r: &Relation) -> Result<Vec<PartialOperation>> {
        if !self.is_subuniverse(r)? {
            return input("hom_set requires a subuniverse");
        }
        let src = IndexedAlgebra::from_relation(self, r);
        let maps = hom_search(&src, self);
        Ok(maps
            .into_iter()
            .map(|vals| PartialOperation::new_unchecked(r.clone(), vals))
            .collect())
    }

    /// Some hom `r → M` that is not a coordinate projection, if any.
    pub fn non_projection_hom(&self, r: &Relation) -> Result<Option<PartialOperation>> {
        if !self.is_subuniverse(r)? {
            return input("hom search requires a subuniverse");
        }
        let src = IndexedAlgebra::from_relation(self, r);
        let columns: Vec<Vec<Elem>> = (0..r.arity()).map(|i| r.column(i)).collect();
        let found = hom_search_first(&src, self, &|vals| !columns.iter().any(|c| c.as_slice() == vals));
        Ok(found.map(|vals| PartialOperation::new_unchecked(r.clone(), vals)))
    }

    /// All homomorphisms from `self` to `target`, as value vectors over
    /// `self`'s carrier in lexicographic order. Operations are matched by name.
    pub fn homs_to(&self, target: &FiniteAlgebra) -> Result<Vec<Vec<Elem>>> {
        let mut tables = Vec::new();
        for op in &target.ops {
            let mine = self
                .op(&op.name)
                .filter(|o| o.arity == op.arity)
                .ok_or_else(|| Error::SignatureMismatch(format!("operation `{}` missing", op.name)))?;
            tables.push(IndexedOp::Dense(mine.table.iter().map(|&v| v as u32).collect()));
        }
        if self.ops.len() != target.ops.len() {
            return Err(Error::SignatureMismatch("operation sets differ".into()));
        }
        let src = IndexedAlgebra {
            size: self.size(),
            arities: target.ops.iter().map(|o| o.arity).collect(),
            ops: tables,
            rel: None,
        };
        Ok(hom_search(&src, target))
    }
}

pub(crate) fn format_tuple(names: &[String], t: &[Elem]) -> String {
    if names.iter().all(|e| e.chars().count() == 1) && !t.is_empty() {
        t.iter().map(|&x| names[x].as_str()).collect()
    } else {
        let parts: Vec<&str> = t.iter().map(|&x| names[x].as_str()).collect();
        format!("({})", parts.join(","))
    }
}

/// Calls `f` on every `k`-tuple over `0..n` in lexicographic order until it
/// returns `false`.
pub(crate) fn for_each_tuple(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > 0 && n == 0 {
        return;
    }
    let mut idx = vec![0; k];
    loop {
        if !f(&idx) {
            return;
        }
        let mut p = k;
        loop {
            if p == 0 {
                return;
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < n {
                break;
            }
            idx[p] = 0;
        }
    }
}

/// Calls `f` on every `k`-tuple over `items` that contains `e` at least once,
/// each tuple exactly once. `e` must occur in `items`.
pub(crate) fn for_each_tuple_containing(items: &[usize], e: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let others: Vec<usize> = items.iter().copied().filter(|&x| x != e).collect();
    let mut buf = vec![0; k];
    for p in 0..k {
        // positions before p avoid e, position p is e, later ones are free
        let sizes: Vec<usize> = (0..k)
            .map(|q| if q < p { others.len() } else if q == p { 1 } else { items.len() })
            .collect();
        if sizes.contains(&0) {
            continue;
        }
        let mut idx = vec![0usize; k];
        'outer: loop {
            for q in 0..k {
                buf[q] = if q < p {
                    others[idx[q]]
                } else if q == p {
                    e
                } else {
                    items[idx[q]]
                };
            }
            f(&buf);
            let mut q = k;
            loop {
                if q == 0 {
                    break 'outer;
                }
                q -= 1;
                idx[q] += 1;
                if idx[q] < sizes[q] {
                    break;
                }
                idx[q] = 0;
            }
        }
    }
}

/// `M^n` with elements coded by [`encode`], used for closure computations.
struct PowerAlgebra<'a> {
    m: &'a FiniteAlgebra,
    n: usize,
    size: usize,
    tables: Vec<Option<Vec<u32>>>,
}

impl<'a> PowerAlgebra<'a> {
    fn new(m: &'a FiniteAlgebra, n: usize) -> Result<Self> {
        let size = power_size(m.size(), n)
            .filter(|&s| s <= 1 << 22)
            .ok_or_else(|| Error::BoundExceeded(format!("power M^{n} is too large")))?;
        let mut p = PowerAlgebra { m, n, size, tables: Vec::new() };
        p.tables = m
            .ops
            .iter()
            .enumerate()
            .map(|(oi, op)| {
                power_size(size, op.arity).filter(|&s| s <= 1 << 21).map(|total| {
                    (0..total)
                        .map(|c| {
                            let args = decode(size, op.arity, c);
                            p.apply_direct(oi, &args) as u32
                        })
                        .collect()
                })
            })
            .collect();
        Ok(p)
    }

    fn apply_direct(&self, op: usize, args: &[usize]) -> usize {
        let tuples: Vec<Vec<Elem>> = args.iter().map(|&c| decode(self.m.size(), self.n, c)).collect();
        let refs: Vec<&[Elem]> = tuples.iter().map(|t| t.as_slice()).collect();
        encode(self.m.size(), &self.m.apply_tuples(op, &refs, self.n))
    }

    fn apply(&self, op: usize, args: &[usize]) -> usize {
        match &self.tables[op] {
            Some(t) => t[encode(self.size, args)] as usize,
            None => self.apply_direct(op, args),
        }
    }

    fn bottom(&self) -> Bits {
        vec![0; self.size.div_ceil(64)]
    }

    /// Closure of `base ∪ extra`, where `base` is already closed. Each tuple
    /// of members is evaluated once its last-processed new element is seen.
    fn close(&self, base: &Bits, extra: &[usize]) -> Bits {
        let mut member = base.clone();
        let mut list: Vec<usize> = (0..self.size).filter(|&c| has(&member, c)).collect();
        let mut head = list.len();
        let add = |c: usize, member: &mut Bits, list: &mut Vec<usize>| {
            if !has(member, c) {
                member[c / 64] |= 1 << (c % 64);
                list.push(c);
            }
        };
        if list.is_empty() {
            for (oi, op) in self.m.ops.iter().enumerate() {
                if op.arity == 0 {
                    add(self.apply(oi, &[]), &mut member, &mut list);
                }
            }
            head = 0;
        }
        for &c in extra {
            add(c, &mut member, &mut list);
        }
        while head < list.len() {
            let e = list[head];
            head += 1;
            for (oi, op) in self.m.ops.iter().enumerate() {
                match op.arity {
                    0 => {}
                    1 => add(self.apply(oi, &[e]), &mut member, &mut list),
                    2 => {
                        let mut i = 0;
                        while i < list.len() {
                            let x = list[i];
                            add(self.apply(oi, &[e, x]), &mut member, &mut list);
                            add(self.apply(oi, &[x, e]), &mut member, &mut list);
                            i += 1;
                        }
                    }
                    k => {
                        let snapshot = list.clone();
                        let mut found = Vec::new();
                        for_each_tuple_containing(&snapshot, e, k, |args| found.push(self.apply(oi, args)));
                        for c in found {
                            add(c, &mut member, &mut list);
                        }
                    }
                }
            }
        }
        member
    }

    fn all_closed_sets(&self) -> Vec<Bits> {
        let start = self.close(&self.bottom(), &[]);
        let mut seen: HashSet<Bits> = HashSet::new();
        seen.insert(start.clone());
        let mut frontier = vec![start];
        while !frontier.is_empty() {
            let next: Vec<Vec<Bits>> = par::map(&frontier, |s| {
                (0..self.size).filter(|&c| !has(s, c)).map(|c| self.close(s, &[c])).collect()
            });
            frontier = Vec::new();
            for t in next.into_iter().flatten() {
                if !seen.contains(&t) {
                    seen.insert(t.clone());
                    frontier.push(t);
                }
            }
        }
        seen.into_iter().collect()
    }

    fn relation(&self, set: &Bits) -> Relation {
        let ts = (0..self.size)
            .filter(|&c| has(set, c))
            .map(|c| decode(self.m.size(), self.n, c))
            .collect();
        Relation::from_tuples_unchecked(self.m.size(), self.n, ts)
    }
}

type Bits = Vec<u64>;

fn has(bits: &Bits, c: usize) -> bool {
    bits[c / 64] >> (c % 64) & 1 == 1
}

enum IndexedOp {
    Dense(Vec<u32>),
    /// Coordinatewise application looked up in the source relation.
    Lookup(usize),
}

/// A source algebra with elements `0..size`, its operations aligned with the
/// target's operation list.
struct IndexedAlgebra<'a> {
    size: usize,
    arities: Vec<usize>,
    ops: Vec<IndexedOp>,
    rel: Option<(&'a FiniteAlgebra, &'a Relation)>,
}

impl<'a> IndexedAlgebra<'a> {
    fn from_relation(m: &'a FiniteAlgebra, r: &'a Relation) -> Self {
        let size = r.len();
        let ops = m
            .ops
            .iter()
            .enumerate()
            .map(|(oi, op)| match power_size(size, op.arity).filter(|&s| s <= 1 << 20) {
                Some(total) => IndexedOp::Dense(
                    (0..total)
                        .map(|c| {
                            let idx = decode(size, op.arity, c);
                            let args: Vec<&[Elem]> = idx.iter().map(|&i| r.tuple(i)).collect();
                            r.index_of(&m.apply_tuples(oi, &args, r.arity())).expect("closed") as u32
                        })
                        .collect(),
                ),
                None => IndexedOp::Lookup(oi),
            })
            .collect();
        IndexedAlgebra { size, arities: m.ops.iter().map(|o| o.arity).collect(), ops, rel: Some((m, r)) }
    }

    fn apply(&self, op: usize, args: &[usize]) -> usize {
        match &self.ops[op] {
            IndexedOp::Dense(t) => t[encode(self.size, args)] as usize,
            IndexedOp::Lookup(oi) => {
                let (m, r) = self.rel.expect("lookup needs a relation");
                let tuples: Vec<&[Elem]> = args.iter().map(|&i| r.tuple(i)).collect();
                r.index_of(&m.apply_tuples(*oi, &tuples, r.arity())).expect("closed")
            }
        }
    }
}

const UNSET: usize = usize::MAX;

#[derive(Clone)]
struct HomState {
    values: Vec<usize>,
    assigned: Vec<usize>,
}

impl HomState {
    /// Assigns `i := v` and propagates through every operation. Returns
    /// `false` on a conflict.
    fn assign(&mut self, src: &IndexedAlgebra, target: &FiniteAlgebra, i: usize, v: usize) -> bool {
        if self.values[i] != UNSET {
            return self.values[i] == v;
        }
        self.values[i] = v;
        self.assigned.push(i);
        let mut queue = vec![i];
        while let Some(e) = queue.pop() {
            let snapshot = self.assigned.clone();
            for (oi, &k) in src.arities.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let mut conflict = false;
                let mut forced = Vec::new();
                for_each_tuple_containing(&snapshot, e, k, |args| {
                    if conflict {
                        return;
                    }
                    let j = src.apply(oi, args);
                    let vals: Vec<usize> = args.iter().map(|&a| self.values[a]).collect();
                    let want = target.apply(oi, &vals);
                    match self.values[j] {
                        UNSET => forced.push((j, want)),
                        have if have != want => conflict = true,
                        _ => {}
                    }
                });
                if conflict {
                    return false;
                }
                for (j, want) in forced {
                    match self.values[j] {
                        UNSET => {
                            self.values[j] = want;
                            self.assigned.push(j);
                            queue.push(j);
                        }
                        have if have != want => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }
}

/// Backtracking enumeration of homomorphisms from `src` to `target`: branch
/// on the least unassigned element, propagate every operation after each
/// assignment. The first branching level is spread across threads.
fn hom_search(src: &IndexedAlgebra, target: &FiniteAlgebra) -> Vec<Vec<Elem>> {
    let mut init = HomState { values: vec![UNSET; src.size], assigned: Vec::new() };
    for (oi, &k) in src.arities.iter().enumerate() {
        if k == 0 {
            let j = src.apply(oi, &[]);
            if !init.assign(src, target, j, target.apply(oi, &[])) {
                return Vec::new();
            }
        }
    }
    fn dfs(src: &IndexedAlgebra, target: &FiniteAlgebra, st: HomState, out: &mut Vec<Vec<Elem>>) {
        match st.values.iter().position(|&v| v == UNSET) {
            None => out.push(st.values),
            Some(i) => {
                for v in 0..target.size() {
                    let mut next = st.clone();
                    if next.assign(src, target, i, v) {
                        dfs(src, target, next, out);
                    }
                }
            }
        }
    }
    let mut out = match init.values.iter().position(|&v| v == UNSET) {
        None => vec![init.values],
        Some(i) => {
            let parts = par::map_range(target.size(), |v| {
                let mut next = init.clone();
                let mut out = Vec::new();
                if next.assign(src, target, i, v) {
                    dfs(src, target, next, &mut out);
                }
                out
            });
            parts.into_iter().flatten().collect()
        }
    };
    out.sort();
    out
}

/// The first hom (in search order, not canonical order) accepted by `pick`.
fn hom_search_first(src: &IndexedAlgebra, target: &FiniteAlgebra, pick: &dyn Fn(&[Elem]) -> bool) -> Option<Vec<Elem>> {
    let mut init = HomState { values: vec![UNSET; src.size], assigned: Vec::new() };
    for (oi, &k) in src.arities.iter().enumerate() {
        if k == 0 {
            let j = src.apply(oi, &[]);
            if !init.assign(src, target, j, target.apply(oi, &[])) {
                return None;
            }
        }
    }
    fn dfs(src: &IndexedAlgebra, target: &FiniteAlgebra, st: HomState, pick: &dyn Fn(&[Elem]) -> bool) -> Option<Vec<Elem>> {
        match st.values.iter().position(|&v| v == UNSET) {
            None => pick(&st.values).then_some(st.values),
            Some(i) => (0..target.size()).find_map(|v| {
                let mut next = st.clone();
                if next.assign(src, target, i, v) {
                    dfs(src, target, next, pick)
                } else {
                    None
                }
            }),
        }
    }
    dfs(src, target, init, pick)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn three() -> FiniteAlgebra {
        // 0 < a < 1 coded 0, 1, 2
        FiniteAlgebra::from_fns(
            "three",
            &["0", "a", "1"],
            vec![
                ("join", 2, Box::new(|x: &[Elem]| x[0].max(x[1]))),
                ("meet", 2, Box::new(|x: &[Elem]| x[0].min(x[1]))),
                ("zero", 0, Box::new(|_: &[Elem]| 0)),
                ("one", 0, Box::new(|_: &[Elem]| 2)),
            ],
        )
        .unwrap()
    }

    fn rel(n: usize, ts: &[&[Elem]]) -> Relation {
        Relation::new(3, n, ts.iter().map(|t| t.to_vec())).unwrap()
    }

    #[test]
    fn subuniverse_examples() {
        let m = three();
        assert!(m.is_subuniverse(&rel(3, &[&[0, 0, 0], &[0, 2, 1], &[2, 2, 2]])).unwrap());
        assert!(m.is_subuniverse(&rel(1, &[&[0], &[2]])).unwrap());
        assert!(!m.is_subuniverse(&rel(2, &[&[0, 2], &[2, 0]])).unwrap());
    }

    #[test]
    fn closure_examples() {
        let m = three();
        assert_eq!(m.subuniverse_closure(1, &[vec![1]]).unwrap(), Relation::full(3, 1));
        assert_eq!(m.subuniverse_closure(1, &[]).unwrap(), rel(1, &[&[0], &[2]]));
        assert_eq!(m.subuniverse_closure(2, Relation::full(3, 2).tuples()).unwrap(), Relation::full(3, 2));
    }

    #[test]
    fn six_homs_on_r5() {
        let r5 = rel(5, &[&[0, 0, 0, 0, 0], &[0, 0, 2, 0, 1], &[0, 2, 2, 1, 2], &[2, 2, 2, 2, 2]]);
        assert_eq!(three().hom_set(&r5).unwrap().len(), 6);
    }

    #[test]
    fn endomorphisms_of_three() {
        let homs = three().hom_set(&Relation::full(3, 1)).unwrap();
        let vals: Vec<&[Elem]> = homs.iter().map(|h| h.values()).collect();
        assert_eq!(vals, vec![&[0, 0, 2][..], &[0, 1, 2], &[0, 2, 2]]);
        assert_eq!(three().hom_set(&rel(1, &[&[0], &[2]])).unwrap().len(), 1);
    }

    #[test]
    fn nullary_constants_conflict_on_trivial_algebra() {
        let one = Relation::full(3, 0);
        assert!(three().hom_set(&one).unwrap().is_empty());
    }

    #[test]
    fn subuniverses_of_three() {
        let subs = three().subuniverses(1).unwrap();
        assert_eq!(subs, vec![rel(1, &[&[0], &[2]]), Relation::full(3, 1)]);
    }

    #[test]
    fn homs_between_algebras() {
        let m = three();
        let sq = m.power(2).unwrap();
        // every hom from the square factors through a projection
        assert_eq!(sq.homs_to(&m).unwrap().len(), 6);
    }

    #[test]
    fn tuples_containing_each_once() {
        let mut seen = Vec::new();
        for_each_tuple_containing(&[3, 5, 7], 5, 2, |t| seen.push(t.to_vec()));
        seen.sort();
        assert_eq!(seen, vec![vec![3, 5], vec![5, 3], vec![5, 5], vec![5, 7], vec![7, 5]]);
    }
}
