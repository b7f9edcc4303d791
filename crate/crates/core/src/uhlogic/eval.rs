//! Evaluation of atoms over finite structures with partial operations, and a
//! backtracking solver for conjunctions of atoms.

use super::syntax::{Atom, Sentence, Term};
use crate::algebra::{Elem, FiniteStructure, Interp, Relation};
use crate::error::{Error, Result};
use crate::par;

#[derive(Clone, Debug)]
enum CTerm {
    Var(usize),
    App(usize, Vec<CTerm>),
}

#[derive(Clone, Debug)]
enum CAtom {
    Rel(usize, Vec<CTerm>),
    Eq(CTerm, CTerm),
    False,
}

/// Value of a term under a partial assignment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tv {
    Val(Elem),
    Undef,
    Unknown,
}

/// Outcome of an atom under a partial assignment.
enum At {
    True,
    False,
    Unknown,
    /// Unknown, but assigning the variable to the value is forced.
    Force(usize, Elem),
}

/// A conjunction of atoms compiled against one structure, over variables
/// `0..nvars` named by `vars`.
#[derive(Clone, Debug)]
pub struct Query<'a> {
    x: &'a FiniteStructure,
    vars: Vec<String>,
    atoms: Vec<CAtom>,
}

fn compile_term(x: &FiniteStructure, vars: &[String], t: &Term) -> Result<CTerm> {
    match t {
        Term::Var(v) => vars
            .iter()
            .position(|w| w == v)
            .map(CTerm::Var)
            .ok_or_else(|| Error::Input(format!("variable `{v}` is not bound"))),
        Term::App(h, args) => {
            let i = x.signature().position(h).ok_or_else(|| Error::UnknownSymbol(h.clone()))?;
            match &x.interps()[i] {
                Interp::Operation(op) if op.arity() == args.len() => {}
                Interp::Operation(op) => {
                    return Err(Error::ArityMismatch { symbol: h.clone(), expected: op.arity(), found: args.len() })
                }
                Interp::Relation(_) => return Err(Error::SignatureMismatch(format!("`{h}` is a relation symbol"))),
            }
            let args = args.iter().map(|a| compile_term(x, vars, a)).collect::<Result<_>>()?;
            Ok(CTerm::App(i, args))
        }
    }
}

fn compile_atom(x: &FiniteStructure, vars: &[String], a: &Atom) -> Result<CAtom> {
    match a {
        Atom::Rel(r, ts) => {
            let i = x.signature().position(r).ok_or_else(|| Error::UnknownSymbol(r.clone()))?;
            match &x.interps()[i] {
                Interp::Relation(rel) if rel.arity() == ts.len() => {}
                Interp::Relation(rel) => {
                    return Err(Error::ArityMismatch { symbol: r.clone(), expected: rel.arity(), found: ts.len() })
                }
                Interp::Operation(_) => {
                    return Err(Error::SignatureMismatch(format!("`{r}` is an operation symbol")))
                }
            }
            let ts = ts.iter().map(|t| compile_term(x, vars, t)).collect::<Result<_>>()?;
            Ok(CAtom::Rel(i, ts))
        }
        Atom::Eq(s, t) => Ok(CAtom::Eq(compile_term(x, vars, s)?, compile_term(x, vars, t)?)),
        Atom::False => Ok(CAtom::False),
    }
}

impl<'a> Query<'a> {
    pub fn new(x: &'a FiniteStructure, vars: &[String], atoms: &[Atom]) -> Result<Self> {
        let atoms = atoms.iter().map(|a| compile_atom(x, vars, a)).collect::<Result<_>>()?;
        Ok(Query { x, vars: vars.to_vec(), atoms })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn term(&self, t: &CTerm, asg: &[Option<Elem>]) -> Tv {
        match t {
            CTerm::Var(i) => asg[*i].map_or(Tv::Unknown, Tv::Val),
            CTerm::App(h, args) => {
                let mut vals = Vec::with_capacity(args.len());
                let mut unknown = false;
                for a in args {
                    match self.term(a, asg) {
                        Tv::Val(v) => vals.push(v),
                        Tv::Undef => return Tv::Undef,
                        Tv::Unknown => unknown = true,
                    }
                }
                if unknown {
                    return Tv::Unknown;
                }
                match &self.x.interps()[*h] {
                    Interp::Operation(op) => op.apply(&vals).map_or(Tv::Undef, Tv::Val),
                    Interp::Relation(_) => unreachable!("checked at compile time"),
                }
            }
        }
    }

    fn atom(&self, a: &CAtom, asg: &[Option<Elem>]) -> At {
        match a {
            CAtom::False => At::False,
            CAtom::Eq(s, t) => match (self.term(s, asg), self.term(t, asg)) {
                (Tv::Undef, _) | (_, Tv::Undef) => At::False,
                (Tv::Val(a), Tv::Val(b)) => {
                    if a == b {
                        At::True
                    } else {
                        At::False
                    }
                }
                (Tv::Val(a), Tv::Unknown) => match t {
                    CTerm::Var(i) => At::Force(*i, a),
                    _ => At::Unknown,
                },
                (Tv::Unknown, Tv::Val(b)) => match s {
                    CTerm::Var(i) => At::Force(*i, b),
                    _ => At::Unknown,
                },
                _ => At::Unknown,
            },
            CAtom::Rel(r, ts) => {
                let mut vals = Vec::with_capacity(ts.len());
                let mut unknown = false;
                for t in ts {
                    match self.term(t, asg) {
                        Tv::Val(v) => vals.push(v),
                        Tv::Undef => return At::False,
                        Tv::Unknown => unknown = true,
                    }
                }
                if unknown {
                    return At::Unknown;
                }
                match &self.x.interps()[*r] {
                    Interp::Relation(rel) => {
                        if rel.contains(&vals) {
                            At::True
                        } else {
                            At::False
                        }
                    }
                    Interp::Operation(_) => unreachable!("checked at compile time"),
                }
            }
        }
    }

    /// Forces values until a fixpoint. `false` means some atom failed.
    fn propagate(&self, asg: &mut [Option<Elem>]) -> bool {
        loop {
            let mut changed = false;
            for a in &self.atoms {
                match self.atom(a, asg) {
                    At::False => return false,
                    At::Force(i, v) => {
                        asg[i] = Some(v);
                        changed = true;
                    }
                    At::True | At::Unknown => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn dfs(&self, mut asg: Vec<Option<Elem>>, visit: &mut dyn FnMut(&[Elem]) -> bool) -> bool {
        if !self.propagate(&mut asg) {
            return true;
        }
        match asg.iter().position(Option::is_none) {
            None => {
                let full: Vec<Elem> = asg.iter().map(|v| v.unwrap()).collect();
                visit(&full)
            }
            Some(i) => {
                for v in 0..self.x.size() {
                    let mut next = asg.clone();
                    next[i] = Some(v);
                    if !self.dfs(next, visit) {
                        return false;
                    }
                }
                true
            }
        }
    }

    /// Visits every satisfying assignment extending `fixed`, in lexicographic
    /// order, until `visit` returns `false`.
    pub fn for_each_solution(&self, fixed: &[Option<Elem>], visit: &mut dyn FnMut(&[Elem]) -> bool) {
        let mut asg = fixed.to_vec();
        asg.resize(self.nvars(), None);
        self.dfs(asg, visit);
    }

    pub fn solutions(&self, fixed: &[Option<Elem>]) -> Vec<Vec<Elem>> {
        let mut out = Vec::new();
        self.for_each_solution(fixed, &mut |s| {
            out.push(s.to_vec());
            true
        });
        out
    }

    pub fn first_solution(&self, fixed: &[Option<Elem>]) -> Option<Vec<Elem>> {
        let mut out = None;
        self.for_each_solution(fixed, &mut |s| {
            out = Some(s.to_vec());
            false
        });
        out
    }

    pub fn is_satisfiable(&self, fixed: &[Option<Elem>]) -> bool {
        self.first_solution(fixed).is_some()
    }

    /// The solution set as a relation over the variables in order.
    pub fn relation(&self) -> Relation {
        let sols = self.solutions(&[]);
        Relation::new(self.x.size(), self.nvars(), sols).expect("solutions lie in the carrier")
    }
}

/// `∀ vars [ premise → ∃ exists (conclusion) ]`, where `conclusion` is a
/// conjunction (`[False]` for ⊥). Uniform shape for plain and naturalised
/// sentences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HornShape {
    pub vars: Vec<String>,
    pub premise: Vec<Atom>,
    pub exists: Vec<String>,
    pub conclusion: Vec<Atom>,
}

impl From<&Sentence> for HornShape {
    fn from(s: &Sentence) -> Self {
        HornShape {
            vars: s.vars.clone(),
            premise: s.premise.clone(),
            exists: Vec::new(),
            conclusion: vec![s.conclusion.clone()],
        }
    }
}

/// An assignment satisfying the premise but not the conclusion, if any.
pub fn counterexample(x: &FiniteStructure, s: &HornShape) -> Result<Option<Vec<Elem>>> {
    let premise = Query::new(x, &s.vars, &s.premise)?;
    let mut all = s.vars.clone();
    all.extend(s.exists.iter().cloned());
    let conclusion = Query::new(x, &all, &s.conclusion)?;
    let fails = |p: &[Elem]| {
        let fixed: Vec<Option<Elem>> = p.iter().map(|&v| Some(v)).collect();
        !conclusion.is_satisfiable(&fixed)
    };
    // split on the first variable's value when there is one
    if s.vars.is_empty() || x.size() < 2 {
        let mut found = None;
        premise.for_each_solution(&[], &mut |p| {
            if fails(p) {
                found = Some(p.to_vec());
                false
            } else {
                true
            }
        });
        return Ok(found);
    }
    let firsts: Vec<Elem> = (0..x.size()).collect();
    let hit = par::find_first(&firsts, |&v| {
        let mut found = None;
        premise.for_each_solution(&[Some(v)], &mut |p| {
            if fails(p) {
                found = Some(p.to_vec());
                false
            } else {
                true
            }
        });
        found
    });
    Ok(hit.map(|(_, p)| p))
}

/// `X ⊨ s` under partial-term semantics.
pub fn models(x: &FiniteStructure, s: &Sentence) -> Result<bool> {
    Ok(counterexample(x, &HornShape::from(s))?.is_none())
}

/// The relation defined on `X` by the premise of `s`, over its prefix.
pub fn premise_relation(x: &FiniteStructure, s: &Sentence) -> Result<Relation> {
    Ok(Query::new(x, &s.vars, &s.premise)?.relation())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PartialOperation;
    use crate::uhlogic::parser::parse_sentence;

    fn three_fg() -> FiniteStructure {
        let f = PartialOperation::from_pairs(3, 1, vec![(vec![0], 0), (vec![1], 0), (vec![2], 2)]).unwrap();
        let g = PartialOperation::from_pairs(3, 1, vec![(vec![0], 0), (vec![1], 2), (vec![2], 2)]).unwrap();
        FiniteStructure::from_symbols(
            "three0",
            ["0", "a", "1"].iter().map(|s| s.to_string()).collect(),
            vec![("f".into(), Interp::Operation(f)), ("g".into(), Interp::Operation(g))],
        )
        .unwrap()
    }

    #[test]
    fn r5_is_the_premise_relation() {
        let s = parse_sentence("! u v w x y : f(x)=u & g(x)=v & f(y)=v & g(y)=w -> u=u").unwrap();
        let r = premise_relation(&three_fg(), &s).unwrap();
        let want = Relation::new(
            3,
            5,
            vec![vec![0, 0, 0, 0, 0], vec![0, 0, 2, 0, 1], vec![0, 2, 2, 1, 2], vec![2, 2, 2, 2, 2]],
        )
        .unwrap();
        assert_eq!(r, want);
    }

    #[test]
    fn dom_h_from_f_and_g() {
        let s = parse_sentence("! x y : g(x)=f(y) -> x=x").unwrap();
        let r = premise_relation(&three_fg(), &s).unwrap();
        assert_eq!(r.tuples(), &[vec![0, 0], vec![0, 1], vec![1, 2], vec![2, 2]]);
    }

    #[test]
    fn idempotence_sentences_hold() {
        let x = three_fg();
        for t in ["! v : -> f(v)=f(f(v))", "! v : -> g(v)=f(g(v))", "! u v : f(u)=f(v) & g(u)=g(v) -> u=v"] {
            assert!(models(&x, &parse_sentence(t).unwrap()).unwrap(), "{t}");
        }
        assert!(!models(&x, &parse_sentence("! u v : f(u)=f(v) -> u=v").unwrap()).unwrap());
        // vacuous: the premise never holds
        assert!(models(&x, &parse_sentence("! u : false -> false").unwrap()).unwrap());
        assert!(models(&x, &parse_sentence("! u : f(u)=g(u) & f(u)=a -> false").unwrap()).is_err());
    }

    #[test]
    fn empty_premise_gives_full_relation() {
        let s = parse_sentence("! u v : -> u=u").unwrap();
        assert_eq!(premise_relation(&three_fg(), &s).unwrap().len(), 9);
    }
}
