//! Hom-minimal relations, hat relations and conjunct-atomic definability.
//!
//! `cadef_define` first tries the conjunction of every variable-only atom
//! true on `r`. For a hom-minimal `r` that is already decisive: each term
//! restricted to `r` is a hom, hence a coordinate, so any defining formula
//! flattens into variable-only atoms. Otherwise atoms over clone members of
//! arity `n` are used, grouped by their values on `r`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::algebra::{all_tuples, AlterEgo, Elem, FiniteAlgebra, FiniteStructure, Interp, Relation, SymbolKind};
use crate::clone::{var_name, CloneLimits, PartialClone};
use crate::error::{Error, Result};
use crate::par;
use crate::uhlogic::{Atom, Query, Term};

/// A conjunction of atoms in the variables `vars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    pub vars: Vec<String>,
    pub atoms: Vec<Atom>,
}

pub type ConjunctAtomicFormula = Formula;

impl Formula {
    /// The relation the formula defines in `x`.
    pub fn solutions(&self, x: &FiniteStructure) -> Result<Relation> {
        Ok(Query::new(x, &self.vars, &self.atoms)?.relation())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : ", self.vars.join(" "))?;
        write_atoms(f, &self.atoms)
    }
}

fn write_atoms(f: &mut fmt::Formatter<'_>, atoms: &[Atom]) -> fmt::Result {
    if atoms.is_empty() {
        return write!(f, "true");
    }
    let parts: Vec<String> = atoms.iter().map(Atom::to_string).collect();
    write!(f, "{}", parts.join(" & "))
}

/// `∃ bound (atoms)` with free variables `free`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PpFormula {
    pub free: Vec<String>,
    pub bound: Vec<String>,
    pub atoms: Vec<Atom>,
}

impl PpFormula {
    pub fn solutions(&self, x: &FiniteStructure) -> Result<Relation> {
        let mut vars = self.free.clone();
        vars.extend(self.bound.iter().cloned());
        let all = Query::new(x, &vars, &self.atoms)?.relation();
        let coords: Vec<usize> = (0..self.free.len()).collect();
        Ok(all.project(&coords))
    }
}

impl fmt::Display for PpFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : ", self.free.join(" "))?;
        if !self.bound.is_empty() {
            write!(f, "exists {} . ", self.bound.join(" "))?;
        }
        write_atoms(f, &self.atoms)
    }
}

fn nonempty(r: &Relation, what: &str) -> Result<()> {
    if r.is_empty() {
        return Err(Error::Input(format!("{what} is not defined for the empty relation")));
    }
    Ok(())
}

/// Whether every hom `r → M` is a coordinate projection.
pub fn is_hom_minimal(m: &FiniteAlgebra, r: &Relation) -> Result<bool> {
    nonempty(r, "hom-minimality")?;
    Ok(m.non_projection_hom(r)?.is_none())
}

/// Non-empty hom-minimal subuniverses of `M^k` for `1 ≤ k ≤ max_arity`,
/// by arity and then in subuniverse order.
pub fn hom_minimal_relations(m: &FiniteAlgebra, max_arity: usize) -> Result<Vec<Relation>> {
    if max_arity == 0 {
        return Err(Error::Input("the arity bound must be at least 1".into()));
    }
    let mut out = Vec::new();
    for k in 1..=max_arity {
        let subs: Vec<Relation> = m.subuniverses(k)?.into_iter().filter(|r| !r.is_empty()).collect();
        let keep = par::map(&subs, |r| is_hom_minimal(m, r));
        for (r, k) in subs.into_iter().zip(keep) {
            if k? {
                out.push(r);
            }
        }
    }
    Ok(out)
}

/// `r̂ = {(ā, f₁(ā), …, f_m(ā))}` over the homs `r → M` in canonical order.
pub fn hat_relation(m: &FiniteAlgebra, r: &Relation) -> Result<Relation> {
    nonempty(r, "the hat relation")?;
    let homs = m.hom_set(r)?;
    let tuples = r.tuples().iter().enumerate().map(|(i, t)| {
        let mut row = t.clone();
        row.extend(homs.iter().map(|h| h.values()[i]));
        row
    });
    Relation::new(r.universe(), r.arity() + homs.len(), tuples)
}

fn vnames(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn eval_flat(x: &FiniteStructure, sym: usize, args: &[usize], t: &[Elem]) -> Option<Elem> {
    let vals: Vec<Elem> = args.iter().map(|&i| t[i]).collect();
    match &x.interps()[sym] {
        Interp::Operation(h) => h.apply(&vals),
        Interp::Relation(_) => unreachable!(),
    }
}

/// Every variable-only atom over `x`'s signature in `n` variables that
/// holds at every tuple of `r`.
pub fn canonical_variable_formula(x: &FiniteStructure, r: &Relation) -> Formula {
    let n = r.arity();
    let names = vnames("v", n);
    let var = |i: usize| Term::Var(names[i].clone());
    let mut atoms = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if r.tuples().iter().all(|t| t[i] == t[j]) {
                atoms.push(Atom::Eq(var(i), var(j)));
            }
        }
    }
    for (sym, (s, interp)) in x.signature().symbols().iter().zip(x.interps()).enumerate() {
        for args in all_tuples(n, s.arity) {
            let app = || Term::App(s.name.clone(), args.iter().map(|&i| var(i)).collect());
            match interp {
                Interp::Relation(rel) => {
                    if r.tuples().iter().all(|t| rel.contains(&args.iter().map(|&i| t[i]).collect::<Vec<_>>())) {
                        atoms.push(Atom::Rel(s.name.clone(), args.iter().map(|&i| var(i)).collect()));
                    }
                }
                Interp::Operation(_) => {
                    let vals: Vec<Option<Elem>> = r.tuples().iter().map(|t| eval_flat(x, sym, &args, t)).collect();
                    if vals.iter().any(Option::is_none) {
                        continue;
                    }
                    let mut equal = false;
                    for i0 in 0..n {
                        if r.tuples().iter().zip(&vals).all(|(t, v)| *v == Some(t[i0])) {
                            atoms.push(Atom::Eq(app(), var(i0)));
                            equal = true;
                        }
                    }
                    if !equal {
                        atoms.push(Atom::def(app()));
                    }
                }
            }
        }
    }
    Formula { vars: names, atoms }
}

/// Number of solutions of `atoms`, counting no further than `limit`.
fn count_up_to(x: &FiniteStructure, vars: &[String], atoms: &[Atom], limit: usize) -> Result<usize> {
    let q = Query::new(x, vars, atoms)?;
    let mut count = 0;
    q.for_each_solution(&[], &mut |_| {
        count += 1;
        count <= limit
    });
    Ok(count)
}

/// Greedily drops atoms (last first) while the solution set stays `r`.
/// `f` must define `r` in `x`.
pub fn simplify(x: &FiniteStructure, f: &Formula, r: &Relation) -> Result<Formula> {
    let mut atoms = f.atoms.clone();
    let target = r.len();
    let mut i = atoms.len();
    while i > 0 {
        i -= 1;
        let mut trial = atoms.clone();
        trial.remove(i);
        // every atom holds on r, so the solution set only grows
        if count_up_to(x, &f.vars, &trial, target)? == target {
            atoms = trial;
        }
    }
    let out = Formula { vars: f.vars.clone(), atoms };
    debug_assert_eq!(&out.solutions(x).unwrap(), r);
    Ok(out)
}

/// Conjunct-atomic definability from one alter ego, sharing a clone cache
/// across queries.
pub struct Definer {
    ego: AlterEgo,
    clone: PartialClone,
}

impl Definer {
    pub fn new(ego: &AlterEgo, limits: CloneLimits) -> Self {
        Definer { ego: ego.clone(), clone: PartialClone::new(ego, limits) }
    }

    pub fn ego(&self) -> &AlterEgo {
        &self.ego
    }

    pub fn clone_cache(&self) -> &PartialClone {
        &self.clone
    }

    /// A defining formula, or `None` when `r ∉ cadef(E)`. `Err` with
    /// `BoundExceeded` when the answer needs clone members beyond the bound.
    pub fn define(&self, r: &Relation) -> Result<Option<Formula>> {
        match self.find(r)? {
            Some(f) => simplify(self.ego.structure(), &f, r).map(Some),
            None => Ok(None),
        }
    }

    pub fn is_definable(&self, r: &Relation) -> Result<bool> {
        Ok(self.find(r)?.is_some())
    }

    /// Some defining formula, unsimplified.
    fn find(&self, r: &Relation) -> Result<Option<Formula>> {
        nonempty(r, "conjunct-atomic definability")?;
        let x = self.ego.structure();
        if r.universe() != x.size() {
            return Err(Error::Input("relation lives on another carrier".into()));
        }
        let alg = self.ego.algebra();
        if !alg.is_subuniverse(r)? {
            return Ok(None);
        }
        let canonical = canonical_variable_formula(x, r);
        if count_up_to(x, &canonical.vars, &canonical.atoms, r.len())? == r.len() {
            return Ok(Some(canonical));
        }
        if is_hom_minimal(alg, r)? {
            return Ok(None);
        }
        self.term_formula(r)
    }

    /// The canonical formula over clone-member terms, if it defines `r`.
    fn term_formula(&self, r: &Relation) -> Result<Option<Formula>> {
        let n = r.arity();
        let u = r.universe();
        let fragment = self.clone.members(n)?;
        let on_r: Vec<usize> = (0..fragment.members.len())
            .filter(|&i| r.tuples().iter().all(|t| fragment.members[i].apply(u, t).is_some()))
            .collect();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut by_values: HashMap<Vec<Elem>, usize> = HashMap::new();
        for &i in &on_r {
            let vals: Vec<Elem> = r.tuples().iter().map(|t| fragment.members[i].apply(u, t).unwrap()).collect();
            match by_values.get(&vals) {
                Some(&g) => groups[g].push(i),
                None => {
                    by_values.insert(vals, groups.len());
                    groups.push(vec![i]);
                }
            }
        }
        let x = self.ego.structure();
        let mut rel_atoms: Vec<(usize, Vec<usize>)> = Vec::new();
        for (sym, (s, interp)) in x.signature().symbols().iter().zip(x.interps()).enumerate() {
            let Interp::Relation(rel) = interp else { continue };
            for gs in all_tuples(groups.len(), s.arity) {
                let holds = r.tuples().iter().all(|t| {
                    let vals: Vec<Elem> = gs.iter().map(|&g| fragment.members[groups[g][0]].apply(u, t).unwrap()).collect();
                    rel.contains(&vals)
                });
                if holds {
                    rel_atoms.push((sym, gs));
                }
            }
        }
        let points: Vec<Vec<Elem>> = all_tuples(u, n).collect();
        let sat = |p: &Vec<Elem>| -> bool {
            let mut rep_vals = Vec::with_capacity(groups.len());
            for g in &groups {
                let v = fragment.members[g[0]].apply(u, p);
                let Some(v) = v else { return false };
                if g[1..].iter().any(|&m| fragment.members[m].apply(u, p) != Some(v)) {
                    return false;
                }
                rep_vals.push(v);
            }
            rel_atoms.iter().all(|(sym, gs)| {
                let Interp::Relation(rel) = &x.interps()[*sym] else { unreachable!() };
                rel.contains(&gs.iter().map(|&g| rep_vals[g]).collect::<Vec<_>>())
            })
        };
        let hits = par::map(&points, sat);
        let count = hits.iter().filter(|&&b| b).count();
        if count != r.len() {
            return Ok(None);
        }
        let names = vnames("v", n);
        let map: std::collections::HashMap<String, String> =
            (0..n).map(|i| (var_name(i), names[i].clone())).collect();
        let term = |m: usize| fragment.members[m].term.rename(&map);
        let mut atoms = Vec::new();
        for g in &groups {
            let rep = term(g[0]);
            if g.len() == 1 && !rep.is_var() {
                atoms.push(Atom::def(rep.clone()));
            }
            for &m in &g[1..] {
                atoms.push(Atom::Eq(term(m), rep.clone()));
            }
        }
        for (sym, gs) in &rel_atoms {
            let name = x.signature().symbols()[*sym].name.clone();
            atoms.push(Atom::Rel(name, gs.iter().map(|&g| term(groups[g][0])).collect()));
        }
        Ok(Some(Formula { vars: names, atoms }))
    }
}

/// A formula defining `r` in `E`, or `None` if `r ∉ cadef(E)`.
pub fn cadef_define(ego: &AlterEgo, r: &Relation) -> Result<Option<Formula>> {
    Definer::new(ego, CloneLimits::default()).define(r)
}

/// `β̂_r` defining `r̂`, and `β_r = ∃w̄ β̂_r` defining `r`.
#[derive(Clone, Debug)]
pub struct Beta {
    pub relation: Relation,
    pub hat: Relation,
    pub hat_formula: Formula,
    pub beta: PpFormula,
}

impl Beta {
    pub fn arity(&self) -> usize {
        self.relation.arity()
    }

    /// Number of hidden coordinates `m = |hom(r, M)|`.
    pub fn hidden(&self) -> usize {
        self.hat.arity() - self.relation.arity()
    }
}

/// `β̂_r` and `β_r` in `E2`. Fails when `r̂ ∉ cadef(E2)`.
pub fn beta_formulas(ego2: &AlterEgo, r: &Relation) -> Result<Beta> {
    BetaTable::new(ego2, CloneLimits::default()).get(r).map(|b| (*b).clone())
}

/// β-formulas for one alter ego, memoised by relation.
pub struct BetaTable {
    definer: Definer,
    cache: Mutex<HashMap<Relation, Arc<Beta>>>,
}

impl BetaTable {
    pub fn new(ego: &AlterEgo, limits: CloneLimits) -> Self {
        BetaTable { definer: Definer::new(ego, limits), cache: Mutex::new(HashMap::new()) }
    }

    pub fn ego(&self) -> &AlterEgo {
        self.definer.ego()
    }

    pub fn get(&self, r: &Relation) -> Result<Arc<Beta>> {
        if let Some(b) = self.cache.lock().unwrap().get(r) {
            return Ok(b.clone());
        }
        let alg = self.ego().algebra();
        let hat = hat_relation(alg, r)?;
        let n = r.arity();
        let m = hat.arity() - n;
        let x = self.ego().structure();
        let canonical = canonical_variable_formula(x, &hat);
        if count_up_to(x, &canonical.vars, &canonical.atoms, hat.len())? != hat.len() {
            return Err(Error::Precondition(format!(
                "the hat relation of {} is not conjunct-atomic definable from `{}`",
                describe(alg, r),
                self.ego().name()
            )));
        }
        let simple = simplify(x, &canonical, &hat)?;
        let mut vars = vnames("v", n);
        vars.extend(vnames("w", m));
        let map: HashMap<String, String> =
            simple.vars.iter().cloned().zip(vars.iter().cloned()).collect();
        let atoms: Vec<Atom> = simple.atoms.iter().map(|a| a.rename(&map)).collect();
        let beta = Beta {
            relation: r.clone(),
            hat,
            hat_formula: Formula { vars: vars.clone(), atoms: atoms.clone() },
            beta: PpFormula { free: vars[..n].to_vec(), bound: vars[n..].to_vec(), atoms },
        };
        let beta = Arc::new(beta);
        self.cache.lock().unwrap().insert(r.clone(), beta.clone());
        Ok(beta)
    }
}

/// `{t₁, t₂, …}` in element names.
pub fn describe(m: &FiniteAlgebra, r: &Relation) -> String {
    let ts: Vec<String> = r.tuples().iter().map(|t| m.tuple_name(t)).collect();
    format!("{{{}}}", ts.join(", "))
}

/// The relation interpreting a symbol of `E`: the relation itself or the
/// graph of the partial operation.
pub fn symbol_relation(ego: &AlterEgo, name: &str) -> Result<(SymbolKind, Relation)> {
    let i = ego.structure().interp(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
    Ok((i.kind(), i.as_relation()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{algebra, ego};

    fn rel(m: &FiniteAlgebra, tuples: &[&str]) -> Relation {
        let ts = tuples.iter().map(|t| t.chars().map(|c| m.element_index(&c.to_string()).unwrap()).collect());
        Relation::new(m.size(), tuples[0].len(), ts).unwrap()
    }

    #[test]
    fn hom_minimal_examples() {
        let three = algebra("three").unwrap();
        assert!(is_hom_minimal(&three, &rel(&three, &["000", "01a", "111"])).unwrap());
        assert!(!is_hom_minimal(&three, &rel(&three, &["0", "a", "1"])).unwrap());
        let q = algebra("Q").unwrap();
        assert!(is_hom_minimal(&q, &rel(&q, &["00", "ab", "11"])).unwrap());
    }

    #[test]
    fn dom_h_in_three0() {
        let e = ego("three0").unwrap();
        let r = rel(e.algebra(), &["00", "0a", "a1", "11"]);
        let f = cadef_define(&e, &r).unwrap().expect("dom h is conjunct-atomic definable");
        assert_eq!(f.solutions(e.structure()).unwrap(), r);
        assert_eq!(f.atoms.len(), 1);
        assert!(!is_hom_minimal(e.algebra(), &r).unwrap());
    }

    #[test]
    fn hat_of_dom_h() {
        let three = algebra("three").unwrap();
        let r = rel(&three, &["00", "0a", "a1", "11"]);
        let hat = hat_relation(&three, &r).unwrap();
        assert_eq!(hat.len(), r.len());
        assert!(hat.arity() > r.arity());
        assert!(is_hom_minimal(&three, &hat).unwrap());
        assert_eq!(hat.project(&[0, 1]), r);
    }

    #[test]
    fn full_relation_is_the_empty_conjunction() {
        let e = ego("three0").unwrap();
        let full = Relation::full(3, 2);
        let f = cadef_define(&e, &full).unwrap().unwrap();
        assert!(f.atoms.is_empty());
        assert_eq!(f.to_string(), "v1 v2 : true");
    }

    #[test]
    fn empty_signature_defines_only_diagonals() {
        let three = algebra("three").unwrap();
        let bare = AlterEgo::new("bare", three.clone(), vec![]).unwrap();
        let d = Definer::new(&bare, CloneLimits::default());
        assert!(!d.is_definable(&rel(&three, &["000", "01a", "111"])).unwrap());
        assert!(d.is_definable(&rel(&three, &["00", "aa", "11"])).unwrap());
        assert!(d.define(&rel(&three, &["00", "01", "11"])).unwrap().is_none());
    }

    #[test]
    fn beta_of_graph_sigma_in_three0() {
        let e = ego("three0").unwrap();
        let r = rel(e.algebra(), &["000", "01a", "111"]);
        let b = beta_formulas(&e, &r).unwrap();
        assert_eq!(b.arity(), 3);
        assert_eq!(b.beta.solutions(e.structure()).unwrap(), r);
        assert_eq!(b.hat_formula.solutions(e.structure()).unwrap(), b.hat);
    }
}
