//! The enriched partial clone generated by an alter ego's operations,
//! materialised one arity at a time.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::algebra::{all_tuples, encode, power_size, AlterEgo, Elem, PartialOperation, Relation};
use crate::error::{Error, Result};
use crate::uhlogic::Term;

const UNDEF: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CloneLimits {
    /// Largest arity that is materialised.
    pub max_arity: usize,
    /// Largest number of members of a single arity.
    pub max_members: usize,
}

impl Default for CloneLimits {
    fn default() -> Self {
        CloneLimits { max_arity: 6, max_members: 60_000 }
    }
}

/// A clone member: dense table over `M^k` (`u32::MAX` where undefined) and
/// a term over `x1 … xk` producing it.
#[derive(Clone, Debug)]
pub struct Member {
    pub table: Vec<u32>,
    pub term: Term,
}

impl Member {
    pub fn apply(&self, universe: usize, args: &[Elem]) -> Option<Elem> {
        let v = self.table[encode(universe, args)];
        (v != UNDEF).then_some(v as Elem)
    }

    pub fn to_operation(&self, universe: usize, arity: usize) -> PartialOperation {
        let pairs = all_tuples(universe, arity)
            .zip(&self.table)
            .filter(|(_, &v)| v != UNDEF)
            .map(|(t, &v)| (t, v as Elem))
            .collect();
        PartialOperation::from_pairs(universe, arity, pairs).expect("dense table is functional")
    }
}

/// Every member of one arity, deduplicated by table.
#[derive(Debug)]
pub struct ArityClone {
    pub arity: usize,
    pub members: Vec<Member>,
}

pub fn var_name(i: usize) -> String {
    format!("x{}", i + 1)
}

/// Lazily materialised fragments of `clo(E)`.
pub struct PartialClone {
    ego: AlterEgo,
    limits: CloneLimits,
    arities: Vec<OnceLock<Result<Arc<ArityClone>>>>,
}

impl PartialClone {
    pub fn new(ego: &AlterEgo, limits: CloneLimits) -> Self {
        PartialClone {
            ego: ego.clone(),
            limits,
            arities: (0..=limits.max_arity).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn ego(&self) -> &AlterEgo {
        &self.ego
    }

    pub fn limits(&self) -> CloneLimits {
        self.limits
    }

    /// All members of arity `k`.
    pub fn members(&self, k: usize) -> Result<Arc<ArityClone>> {
        if k > self.limits.max_arity {
            return Err(Error::BoundExceeded(format!(
                "clone arity {k} is above the bound {}",
                self.limits.max_arity
            )));
        }
        self.arities[k].get_or_init(|| materialise(&self.ego, k, self.limits.max_members).map(Arc::new)).clone()
    }

    /// A member extending `h`, with its term. `Err` means the answer needs a
    /// clone fragment beyond the bounds.
    pub fn find_extension(&self, h: &PartialOperation) -> Result<Option<Term>> {
        let k = h.arity();
        if let Some(&i) = h.projection_indices().first() {
            return Ok(Some(Term::Var(var_name(i))));
        }
        let vars: Vec<Term> = (0..k).map(|i| Term::Var(var_name(i))).collect();
        for (name, g) in self.ego.operations() {
            if g.arity() == k && h.is_extended_by(g) {
                return Ok(Some(Term::App(name.to_string(), vars)));
            }
        }
        // a smaller coordinate set on which dom h projects injectively may
        // already carry an extension
        let dom = h.domain();
        for size in 1..k {
            if size > self.limits.max_arity {
                break;
            }
            let Ok(fragment) = self.members(size) else { continue };
            let mut found = None;
            for_each_subset(k, size, &mut |theta| {
                if !dom.projection_is_injective(theta) {
                    return true;
                }
                let reduced: Vec<(Vec<Elem>, Elem)> = dom
                    .tuples()
                    .iter()
                    .zip(h.values())
                    .map(|(t, &v)| (theta.iter().map(|&c| t[c]).collect(), v))
                    .collect();
                let u = dom.universe();
                if let Some(m) = fragment
                    .members
                    .iter()
                    .find(|m| reduced.iter().all(|(t, v)| m.apply(u, t) == Some(*v)))
                {
                    let map: HashMap<String, String> =
                        theta.iter().enumerate().map(|(j, &c)| (var_name(j), var_name(c))).collect();
                    found = Some(m.term.rename(&map));
                    return false;
                }
                true
            });
            if found.is_some() {
                return Ok(found);
            }
        }
        let full = self.members(k)?;
        let u = dom.universe();
        Ok(full
            .members
            .iter()
            .find(|m| dom.tuples().iter().zip(h.values()).all(|(t, &v)| m.apply(u, t) == Some(v)))
            .map(|m| m.term.clone()))
    }

    pub fn extends(&self, h: &PartialOperation) -> Result<bool> {
        Ok(self.find_extension(h)?.is_some())
    }

    /// A hom `r → M` with no extension in the clone, if any. `r` must be a
    /// non-empty subuniverse.
    pub fn richness_witness(&self, r: &Relation) -> Result<Option<PartialOperation>> {
        if r.is_empty() {
            return Err(Error::Input("operational richness is not defined at the empty relation".into()));
        }
        let homs = self.ego.algebra().hom_set(r)?;
        let mut inconclusive = None;
        for h in homs {
            match self.find_extension(&h) {
                Ok(Some(_)) => {}
                Ok(None) => return Ok(Some(h)),
                Err(e) => inconclusive = Some(e),
            }
        }
        match inconclusive {
            Some(e) => Err(e),
            None => Ok(None),
        }
    }
}

/// Calls `f` on every increasing `size`-subset of `0..n` until it returns
/// `false`.
pub(crate) fn for_each_subset(n: usize, size: usize, f: &mut dyn FnMut(&[usize]) -> bool) {
    fn go(n: usize, size: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == size {
            return f(cur);
        }
        for c in start..n {
            if n - c < size - cur.len() {
                break;
            }
            cur.push(c);
            if !go(n, size, c + 1, cur, f) {
                return false;
            }
            cur.pop();
        }
        true
    }
    go(n, size, 0, &mut Vec::new(), f);
}

/// An operation as it enters composition. A symbol whose domain projects
/// bijectively onto coordinates `θ`, with every other column a term of the
/// `θ` columns in the clone of the remaining symbols, is replaced by its
/// projection onto `θ`. Both generate the same members up to restriction,
/// which is all extension questions see, and the composition cost drops
/// from `|clo|^m` to `|clo|^|θ|`.
struct Generator {
    name: String,
    op: PartialOperation,
    /// The original argument list over `x1 … x|θ|`, when reduced.
    columns: Option<Vec<Term>>,
}

impl Generator {
    fn term(&self, args: Vec<Term>) -> Term {
        match &self.columns {
            None => Term::App(self.name.clone(), args),
            Some(cols) => Term::App(self.name.clone(), cols.iter().map(|c| substitute(c, &args)).collect()),
        }
    }
}

fn substitute(t: &Term, args: &[Term]) -> Term {
    match t {
        Term::Var(v) => (0..args.len()).find(|&i| var_name(i) == *v).map_or_else(|| t.clone(), |i| args[i].clone()),
        Term::App(h, ts) => Term::App(h.clone(), ts.iter().map(|s| substitute(s, args)).collect()),
    }
}

fn generators(ego: &AlterEgo) -> Result<Vec<Generator>> {
    let mut out = Vec::new();
    for (name, h) in ego.operations() {
        let reduced = if h.arity() >= 3 { reduce(ego, name, h)? } else { None };
        out.push(match reduced {
            Some((op, cols)) => Generator { name: name.to_string(), op, columns: Some(cols) },
            None => Generator { name: name.to_string(), op: h.clone(), columns: None },
        });
    }
    Ok(out)
}

fn reduce(ego: &AlterEgo, name: &str, h: &PartialOperation) -> Result<Option<(PartialOperation, Vec<Term>)>> {
    let m = h.arity();
    let dom = h.domain();
    if dom.is_empty() {
        return Ok(None);
    }
    let rest: Vec<&str> = ego.symbols().map(|(s, _)| s.name.as_str()).filter(|&n| n != name).collect();
    let others = PartialClone::new(&ego.reduct(ego.name(), &rest)?, CloneLimits::default());
    for size in 1..m {
        let mut thetas = Vec::new();
        for_each_subset(m, size, &mut |theta| {
            if dom.projection_is_injective(theta) {
                thetas.push(theta.to_vec());
            }
            true
        });
        if thetas.is_empty() {
            continue;
        }
        let Ok(fragment) = others.members(size) else { continue };
        for theta in thetas {
            let mut cols = Vec::with_capacity(m);
            for j in 0..m {
                if let Some(i) = theta.iter().position(|&c| c == j) {
                    cols.push(Term::Var(var_name(i)));
                    continue;
                }
                let hit = fragment.members.iter().find(|mb| {
                    dom.tuples().iter().all(|t| {
                        let sub: Vec<Elem> = theta.iter().map(|&c| t[c]).collect();
                        mb.apply(ego.algebra().size(), &sub) == Some(t[j])
                    })
                });
                match hit {
                    Some(mb) => cols.push(mb.term.clone()),
                    None => break,
                }
            }
            if cols.len() == m {
                let pairs = dom
                    .tuples()
                    .iter()
                    .zip(h.values())
                    .map(|(t, &v)| (theta.iter().map(|&c| t[c]).collect(), v))
                    .collect();
                let op = PartialOperation::from_pairs(ego.algebra().size(), size, pairs)?;
                return Ok(Some((op, cols)));
            }
        }
    }
    Ok(None)
}

/// Semi-naive fixpoint: each round composes every operation with argument
/// tuples containing at least one member found in the previous round.
fn materialise(ego: &AlterEgo, k: usize, cap: usize) -> Result<ArityClone> {
    let u = ego.algebra().size();
    let size = power_size(u, k)
        .filter(|&s| s <= 1 << 20)
        .ok_or_else(|| Error::BoundExceeded(format!("M^{k} is too large to tabulate")))?;
    let points: Vec<Vec<Elem>> = all_tuples(u, k).collect();
    let mut members: Vec<Member> = Vec::new();
    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut push = |m: Member, members: &mut Vec<Member>| -> bool {
        if m.table.iter().all(|&v| v == UNDEF) || index.contains_key(&m.table) {
            return false;
        }
        index.insert(m.table.clone(), members.len());
        members.push(m);
        true
    };
    for i in 0..k {
        let table = points.iter().map(|t| t[i] as u32).collect();
        push(Member { table, term: Term::Var(var_name(i)) }, &mut members);
    }
    let ops = generators(ego)?;
    for Generator { name, op: h, .. } in &ops {
        if h.arity() == 0 {
            if let Some(c) = h.apply(&[]) {
                push(Member { table: vec![c as u32; size], term: Term::App(name.clone(), vec![]) }, &mut members);
            }
        }
    }
    let mut old = 0;
    loop {
        let total = members.len();
        if total == old {
            break;
        }
        let mut fresh: Vec<Member> = Vec::new();
        for g in &ops {
            let h = &g.op;
            let m = h.arity();
            if m == 0 {
                continue;
            }
            let mut args = vec![0usize; m];
            let mut vals = vec![0 as Elem; m];
            // position p holds a new member, earlier positions old ones
            for p in 0..m {
                let ranges: Vec<(usize, usize)> = (0..m)
                    .map(|q| if q < p { (0, old) } else if q == p { (old, total) } else { (0, total) })
                    .collect();
                if ranges.iter().any(|&(a, b)| a >= b) {
                    continue;
                }
                for (q, r) in ranges.iter().enumerate() {
                    args[q] = r.0;
                }
                loop {
                    let table: Vec<u32> = (0..size)
                        .map(|c| {
                            for q in 0..m {
                                let v = members[args[q]].table[c];
                                if v == UNDEF {
                                    return UNDEF;
                                }
                                vals[q] = v as Elem;
                            }
                            h.apply(&vals).map_or(UNDEF, |v| v as u32)
                        })
                        .collect();
                    if table.iter().any(|&v| v != UNDEF) && !index.contains_key(&table) {
                        let term = g.term(args.iter().map(|&a| members[a].term.clone()).collect());
                        index.insert(table.clone(), usize::MAX);
                        fresh.push(Member { table, term });
                        if total + fresh.len() > cap {
                            return Err(Error::BoundExceeded(format!(
                                "more than {cap} clone members of arity {k}"
                            )));
                        }
                    }
                    if !advance(&mut args, &ranges) {
                        break;
                    }
                }
            }
        }
        old = total;
        for m in fresh {
            let i = members.len();
            index.insert(m.table.clone(), i);
            members.push(m);
        }
    }
    Ok(ArityClone { arity: k, members })
}

/// Odometer step over `ranges`; `false` after the last tuple.
fn advance(args: &mut [usize], ranges: &[(usize, usize)]) -> bool {
    for q in (0..args.len()).rev() {
        args[q] += 1;
        if args[q] < ranges[q].1 {
            return true;
        }
        args[q] = ranges[q].0;
    }
    false
}

/// `clo(E)` members of arity `k`, as partial operations.
pub fn clone_members(ego: &AlterEgo, k: usize) -> Result<Vec<PartialOperation>> {
    let c = PartialClone::new(ego, CloneLimits { max_arity: k.max(CloneLimits::default().max_arity), ..Default::default() });
    let u = ego.algebra().size();
    Ok(c.members(k)?.members.iter().map(|m| m.to_operation(u, k)).collect())
}

/// Whether `h` extends to a member of `clo(E)`.
pub fn extends_in_clone(ego: &AlterEgo, h: &PartialOperation) -> Result<bool> {
    PartialClone::new(ego, CloneLimits::default()).extends(h)
}

/// Whether every hom `r → M` extends to a member of `clo(E)`.
pub fn op_rich_at(ego: &AlterEgo, r: &Relation) -> Result<bool> {
    Ok(PartialClone::new(ego, CloneLimits::default()).richness_witness(r)?.is_none())
}

/// Why `E1` fails to be a structural reduct of `E2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductWitness {
    /// An operation of `E1` with no extension in `clo(E2)`.
    Operation(String, PartialOperation),
    /// A member of `R1 ∪ dom H1` outside `cadef(E2)`.
    Relation(String, Relation),
}

/// The first obstruction to `E1 ⊑ E2`, or `None` when `E1` is a structural
/// reduct of `E2`.
pub fn structural_reduct_witness(e1: &AlterEgo, e2: &AlterEgo) -> Result<Option<ReductWitness>> {
    e1.same_algebra(e2)?;
    let clone = PartialClone::new(e2, CloneLimits::default());
    let ops = e1.operations();
    let found = crate::par::map(&ops, |(_, h)| clone.find_extension(h));
    for ((name, h), f) in ops.iter().zip(found) {
        if f?.is_none() {
            return Ok(Some(ReductWitness::Operation(name.to_string(), (*h).clone())));
        }
    }
    let definer = crate::definability::Definer::new(e2, CloneLimits::default());
    let rels = e1.relations_and_domains();
    let found = crate::par::map(&rels, |(_, r)| definer.is_definable(r));
    for ((name, r), ok) in rels.into_iter().zip(found) {
        if !ok? {
            return Ok(Some(ReductWitness::Relation(name, r)));
        }
    }
    Ok(None)
}

/// `E1 ⊑ E2`: operations of `E1` extend in `clo(E2)` and `R1 ∪ dom H1 ⊆ cadef(E2)`.
pub fn is_structural_reduct(e1: &AlterEgo, e2: &AlterEgo) -> Result<bool> {
    Ok(structural_reduct_witness(e1, e2)?.is_none())
}

pub fn structurally_equivalent(e1: &AlterEgo, e2: &AlterEgo) -> Result<bool> {
    Ok(is_structural_reduct(e1, e2)? && is_structural_reduct(e2, e1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Interp;
    use crate::catalog::ego;

    fn rel(e: &AlterEgo, tuples: &[&str]) -> Relation {
        let a = e.algebra();
        let ts = tuples.iter().map(|t| t.chars().map(|c| a.element_index(&c.to_string()).unwrap()).collect());
        Relation::new(a.size(), tuples[0].len(), ts).unwrap()
    }

    #[test]
    fn unary_clone_of_three0() {
        let terms: Vec<String> = PartialClone::new(&ego("three0").unwrap(), CloneLimits::default())
            .members(1)
            .unwrap()
            .members
            .iter()
            .map(|m| m.term.to_string())
            .collect();
        assert_eq!(terms, ["x1", "f(x1)", "g(x1)"]);
    }

    #[test]
    fn h_extends_only_where_present() {
        let e0 = ego("three0").unwrap();
        let eh = ego("three_h").unwrap();
        let dom_h = rel(&e0, &["00", "0a", "a1", "11"]);
        assert!(!op_rich_at(&e0, &dom_h).unwrap());
        assert!(op_rich_at(&eh, &dom_h).unwrap());
        let sigma = ego("three_sigma").unwrap();
        let s = sigma.structure().operation("sigma").unwrap();
        assert!(!extends_in_clone(&e0, s).unwrap());
        let h = eh.structure().operation("h").unwrap();
        assert!(extends_in_clone(&eh, h).unwrap());
    }

    #[test]
    fn structural_reducts() {
        let three0 = ego("three0").unwrap();
        let three_h = ego("three_h").unwrap();
        assert!(is_structural_reduct(&three0, &three_h).unwrap());
        assert!(!is_structural_reduct(&three_h, &three0).unwrap());
        let q0 = ego("Q0").unwrap();
        let q1 = ego("Q1").unwrap();
        assert!(!is_structural_reduct(&q1, &q0).unwrap());
        assert!(is_structural_reduct(&q0, &q1).unwrap());
        match structural_reduct_witness(&q1, &q0).unwrap() {
            Some(ReductWitness::Operation(n, _)) => assert_eq!(n, "f"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wide_operation_reduces_to_its_bijective_coordinates() {
        // the h-like hom on {00000, 0010a, 011a1, 11111}
        let e0 = ego("three0").unwrap();
        let r5 = rel(&e0, &["00000", "0010a", "011a1", "11111"]);
        let h5 = PartialOperation::new(r5, vec![0, 1, 1, 2]).unwrap();
        let wide = e0.extended("wide", vec![("k".into(), Interp::Operation(h5))]).unwrap();
        let gens = generators(&wide).unwrap();
        let k = gens.iter().find(|g| g.name == "k").unwrap();
        assert_eq!(k.op.arity(), 2);
        assert_eq!(k.op, *ego("three_h").unwrap().structure().operation("h").unwrap());
        let t = k.term(vec![Term::Var("p".into()), Term::Var("q".into())]);
        // on r5 the second column is both g of the fourth and f of the fifth
        assert_eq!(t.to_string(), "k(f(p),f(q),g(q),p,q)");
        assert!(structurally_equivalent(&wide, &ego("three_h").unwrap()).unwrap());
    }

    #[test]
    fn materialise_respects_the_cap() {
        let c = PartialClone::new(&ego("three_h").unwrap(), CloneLimits { max_arity: 3, max_members: 4 });
        assert!(matches!(c.members(2), Err(Error::BoundExceeded(_))));
        assert!(matches!(c.members(4), Err(Error::BoundExceeded(_))));
    }
}
