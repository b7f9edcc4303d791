//! Finite models of a set of uH-sentences, membership in the finite part of
//! the dual class `IS_cP(E)`, and basis validation built on both.
//!
//! Models are found by assigning one cell (a relation tuple or an operation
//! argument) at a time. After each assignment the sentences mentioning that
//! symbol are searched for a definite violation: an assignment making every
//! premise atom true and the conclusion false, where atoms touching an
//! unassigned cell are unknown and prune the search.

use super::syntax::{Atom, Sentence, Term};
use crate::algebra::{all_tuples, encode, AlterEgo, Elem, FiniteStructure, Interp, PartialOperation, Relation, Signature, SymbolKind};
use crate::error::{Error, Result};

const UNKNOWN: i32 = -2;
const UNDEF: i32 = -1;

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

#[derive(Clone, Copy, PartialEq, Eq)]
enum V {
    Val(usize),
    Undef,
    Unknown,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum T {
    True,
    False,
    Unknown,
}

struct Compiled {
    nvars: usize,
    premise: Vec<(usize, CAtom)>,
    conclusion: CAtom,
    symbols: Vec<usize>,
}

fn compile_term(sig: &Signature, vars: &[String], t: &Term, syms: &mut Vec<usize>) -> Result<CTerm> {
    match t {
        Term::Var(v) => vars
            .iter()
            .position(|w| w == v)
            .map(CTerm::Var)
            .ok_or_else(|| Error::Input(format!("variable `{v}` is not bound"))),
        Term::App(h, args) => {
            let i = sig.position(h).ok_or_else(|| Error::UnknownSymbol(h.clone()))?;
            let s = &sig.symbols()[i];
            if s.kind != SymbolKind::Operation {
                return Err(Error::SignatureMismatch(format!("`{h}` is a relation symbol")));
            }
            if s.arity != args.len() {
                return Err(Error::ArityMismatch { symbol: h.clone(), expected: s.arity, found: args.len() });
            }
            syms.push(i);
            let args = args.iter().map(|a| compile_term(sig, vars, a, syms)).collect::<Result<_>>()?;
            Ok(CTerm::App(i, args))
        }
    }
}

fn compile_atom(sig: &Signature, vars: &[String], a: &Atom, syms: &mut Vec<usize>) -> Result<CAtom> {
    match a {
        Atom::Rel(r, ts) => {
            let i = sig.position(r).ok_or_else(|| Error::UnknownSymbol(r.clone()))?;
            let s = &sig.symbols()[i];
            if s.kind != SymbolKind::Relation {
                return Err(Error::SignatureMismatch(format!("`{r}` is an operation symbol")));
            }
            if s.arity != ts.len() {
                return Err(Error::ArityMismatch { symbol: r.clone(), expected: s.arity, found: ts.len() });
            }
            syms.push(i);
            Ok(CAtom::Rel(i, ts.iter().map(|t| compile_term(sig, vars, t, syms)).collect::<Result<_>>()?))
        }
        Atom::Eq(s, t) => Ok(CAtom::Eq(compile_term(sig, vars, s, syms)?, compile_term(sig, vars, t, syms)?)),
        Atom::False => Ok(CAtom::False),
    }
}

fn max_var_t(t: &CTerm) -> Option<usize> {
    match t {
        CTerm::Var(i) => Some(*i),
        CTerm::App(_, args) => args.iter().filter_map(max_var_t).max(),
    }
}

fn max_var(a: &CAtom) -> Option<usize> {
    match a {
        CAtom::Rel(_, ts) => ts.iter().filter_map(max_var_t).max(),
        CAtom::Eq(s, t) => max_var_t(s).max(max_var_t(t)),
        CAtom::False => None,
    }
}

fn compile(sig: &Signature, s: &Sentence) -> Result<Compiled> {
    let mut syms = Vec::new();
    let mut premise = Vec::new();
    for a in &s.premise {
        let c = compile_atom(sig, &s.vars, a, &mut syms)?;
        // evaluable once every variable up to its largest one is bound
        premise.push((max_var(&c).map_or(0, |m| m + 1), c));
    }
    premise.sort_by_key(|(lvl, _)| *lvl);
    let conclusion = compile_atom(sig, &s.vars, &s.conclusion, &mut syms)?;
    syms.sort_unstable();
    syms.dedup();
    Ok(Compiled { nvars: s.vars.len(), premise, conclusion, symbols: syms })
}

/// Cells of every symbol over an `n`-element carrier.
struct Partial<'a> {
    sig: &'a Signature,
    n: usize,
    cells: Vec<Vec<i32>>,
}

impl Partial<'_> {
    fn term(&self, t: &CTerm, env: &[usize]) -> V {
        match t {
            CTerm::Var(i) => V::Val(env[*i]),
            CTerm::App(h, args) => {
                let mut vals = Vec::with_capacity(args.len());
                let mut unknown = false;
                for a in args {
                    match self.term(a, env) {
                        V::Val(v) => vals.push(v),
                        V::Undef => return V::Undef,
                        V::Unknown => unknown = true,
                    }
                }
                if unknown {
                    return V::Unknown;
                }
                match self.cells[*h][encode(self.n, &vals)] {
                    UNKNOWN => V::Unknown,
                    UNDEF => V::Undef,
                    v => V::Val(v as usize),
                }
            }
        }
    }

    fn atom(&self, a: &CAtom, env: &[usize]) -> T {
        match a {
            CAtom::False => T::False,
            CAtom::Eq(s, t) => match (self.term(s, env), self.term(t, env)) {
                (V::Undef, _) | (_, V::Undef) => T::False,
                (V::Unknown, _) | (_, V::Unknown) => T::Unknown,
                (V::Val(x), V::Val(y)) => {
                    if x == y {
                        T::True
                    } else {
                        T::False
                    }
                }
            },
            CAtom::Rel(r, ts) => {
                let mut vals = Vec::with_capacity(ts.len());
                let mut unknown = false;
                for t in ts {
                    match self.term(t, env) {
                        V::Val(v) => vals.push(v),
                        V::Undef => return T::False,
                        V::Unknown => unknown = true,
                    }
                }
                if unknown {
                    return T::Unknown;
                }
                match self.cells[*r][encode(self.n, &vals)] {
                    UNKNOWN => T::Unknown,
                    0 => T::False,
                    _ => T::True,
                }
            }
        }
    }

    /// Whether some assignment definitely violates `c`.
    fn violated(&self, c: &Compiled) -> bool {
        let mut env = vec![0; c.nvars];
        self.violation_from(c, &mut env, 0, 0)
    }

    fn violation_from(&self, c: &Compiled, env: &mut Vec<usize>, level: usize, next_atom: usize) -> bool {
        let mut k = next_atom;
        while k < c.premise.len() && c.premise[k].0 <= level {
            if self.atom(&c.premise[k].1, env) != T::True {
                return false;
            }
            k += 1;
        }
        if level == c.nvars {
            return self.atom(&c.conclusion, env) == T::False;
        }
        for v in 0..self.n {
            env[level] = v;
            if self.violation_from(c, env, level + 1, k) {
                return true;
            }
        }
        false
    }

    fn to_structure(&self, name: &str) -> Result<FiniteStructure> {
        let elements: Vec<String> = (0..self.n).map(|i| i.to_string()).collect();
        let interps = self
            .sig
            .symbols()
            .iter()
            .zip(&self.cells)
            .map(|(s, cells)| {
                let tuples = all_tuples(self.n, s.arity).zip(cells);
                Ok(match s.kind {
                    SymbolKind::Relation => {
                        Interp::Relation(Relation::new(self.n, s.arity, tuples.filter(|(_, &c)| c == 1).map(|(t, _)| t))?)
                    }
                    SymbolKind::Operation => Interp::Operation(PartialOperation::from_pairs(
                        self.n,
                        s.arity,
                        tuples.filter(|(_, &c)| c >= 0).map(|(t, &c)| (t, c as Elem)).collect(),
                    )?),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteStructure::new(name, elements, self.sig.clone(), interps)
    }
}

/// Calls `visit` on every structure over `{0, …, n-1}` in signature `sig`
/// satisfying all of `sentences`, until it returns `false`. Returns the
/// number of models visited.
pub fn for_each_model(
    sig: &Signature,
    sentences: &[Sentence],
    n: usize,
    visit: &mut dyn FnMut(&FiniteStructure) -> bool,
) -> Result<usize> {
    let compiled: Vec<Compiled> = sentences.iter().map(|s| compile(sig, s)).collect::<Result<_>>()?;
    let sizes: Vec<usize> = sig
        .symbols()
        .iter()
        .map(|s| {
            crate::algebra::power_size(n, s.arity)
                .filter(|&c| c <= 4096)
                .ok_or_else(|| Error::BoundExceeded(format!("too many cells for `{}` at size {n}", s.name)))
        })
        .collect::<Result<_>>()?;
    let mut p = Partial { sig, n, cells: sizes.iter().map(|&c| vec![UNKNOWN; c]).collect() };
    let by_symbol: Vec<Vec<usize>> = (0..sig.len())
        .map(|s| (0..compiled.len()).filter(|&i| compiled[i].symbols.contains(&s)).collect())
        .collect();
    if compiled.iter().any(|c| c.symbols.is_empty() && p.violated(c)) {
        return Ok(0);
    }
    let order: Vec<(usize, usize)> = (0..sig.len()).flat_map(|s| (0..sizes[s]).map(move |c| (s, c))).collect();
    let mut count = 0;
    let mut stop = false;
    fn go(
        p: &mut Partial,
        order: &[(usize, usize)],
        at: usize,
        compiled: &[Compiled],
        by_symbol: &[Vec<usize>],
        count: &mut usize,
        stop: &mut bool,
        visit: &mut dyn FnMut(&FiniteStructure) -> bool,
    ) -> Result<()> {
        if *stop {
            return Ok(());
        }
        let Some(&(s, c)) = order.get(at) else {
            *count += 1;
            let x = p.to_structure(&format!("model{}", *count))?;
            if !visit(&x) {
                *stop = true;
            }
            return Ok(());
        };
        let values: Vec<i32> = match p.sig.symbols()[s].kind {
            SymbolKind::Relation => vec![0, 1],
            SymbolKind::Operation => std::iter::once(UNDEF).chain((0..p.n as i32).collect::<Vec<_>>()).collect(),
        };
        for v in values {
            p.cells[s][c] = v;
            if !by_symbol[s].iter().any(|&i| p.violated(&compiled[i])) {
                go(p, order, at + 1, compiled, by_symbol, count, stop, visit)?;
            }
            if *stop {
                break;
            }
        }
        p.cells[s][c] = UNKNOWN;
        Ok(())
    }
    go(&mut p, &order, 0, &compiled, &by_symbol, &mut count, &mut stop, visit)?;
    Ok(count)
}

/// Whether the evaluation map `X → E^{hom(X, E)}` is an embedding onto a
/// substructure, that is, `X ∈ IS_cP(E)` at the finite level. With no homs the
/// target is the one-point power `E^0`.
pub fn in_finite_dual_class(x: &FiniteStructure, e: &AlterEgo) -> Result<bool> {
    let m = e.structure();
    let homs = x.homs_to(m)?;
    let n = x.size();
    let image = |a: Elem| -> Vec<Elem> { homs.iter().map(|h| h[a]).collect() };
    let images: Vec<Vec<Elem>> = (0..n).map(image).collect();
    for a in 0..n {
        for b in a + 1..n {
            if images[a] == images[b] {
                return Ok(false);
            }
        }
    }
    for (s, (xi, mi)) in x.signature().symbols().iter().zip(x.interps().iter().zip(m.interps())) {
        for t in all_tuples(n, s.arity) {
            match (xi, mi) {
                (Interp::Relation(rx), Interp::Relation(rm)) => {
                    if !rx.contains(&t) && homs.iter().all(|h| rm.contains(&t.iter().map(|&a| h[a]).collect::<Vec<_>>())) {
                        return Ok(false);
                    }
                }
                (Interp::Operation(hx), Interp::Operation(hm)) => {
                    let target: Option<Vec<Elem>> =
                        homs.iter().map(|h| hm.apply(&t.iter().map(|&a| h[a]).collect::<Vec<_>>())).collect();
                    let Some(target) = target else { continue };
                    let y = images.iter().position(|im| *im == target);
                    match (y, hx.apply(&t)) {
                        (Some(y), Some(v)) if y == v => {}
                        _ => return Ok(false),
                    }
                }
                _ => unreachable!("same signature"),
            }
        }
    }
    Ok(true)
}

/// Outcome of validating a candidate basis.
#[derive(Clone, Debug)]
pub enum BasisVerdict {
    Valid { models_checked: usize, max_size: usize },
    /// A sentence the alter ego itself fails.
    FailsInEgo(Sentence),
    /// A finite model of the sentences outside the dual class.
    ExtraModel(FiniteStructure),
}

/// Checks that `E ⊨ Σ` and that every model of `Σ` with at most `max_size`
/// elements lies in `IS_cP(E)`.
pub fn validate_basis(e: &AlterEgo, sentences: &[Sentence], max_size: usize) -> Result<BasisVerdict> {
    for s in sentences {
        if !super::eval::models(e.structure(), s)? {
            return Ok(BasisVerdict::FailsInEgo(s.clone()));
        }
    }
    let sig = e.structure().signature();
    let mut checked = 0;
    for n in 0..=max_size {
        let mut bad = None;
        let mut err = None;
        checked += for_each_model(sig, sentences, n, &mut |x| match in_finite_dual_class(x, e) {
            Ok(true) => true,
            Ok(false) => {
                bad = Some(x.clone());
                false
            }
            Err(e) => {
                err = Some(e);
                false
            }
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        if let Some(x) = bad {
            return Ok(BasisVerdict::ExtraModel(x));
        }
    }
    Ok(BasisVerdict::Valid { models_checked: checked, max_size })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{basis, ego, labelled};

    #[test]
    fn sigma_basis_is_valid_to_three() {
        let e = ego("three_sigma").unwrap();
        let v = validate_basis(&e, &basis("sigma_basis_three").unwrap(), 3).unwrap();
        assert!(matches!(v, BasisVerdict::Valid { .. }), "{v:?}");
    }

    #[test]
    fn dropping_antisymmetry_admits_an_extra_model() {
        let e = ego("three_sigma").unwrap();
        let weak: Vec<Sentence> = ["1", "2", "4"].iter().flat_map(|l| labelled("sigma_basis_three", l).unwrap()).collect();
        assert!(matches!(validate_basis(&e, &weak, 3).unwrap(), BasisVerdict::Valid { .. }));
        let v = validate_basis(&e, &weak, 4).unwrap();
        match v {
            BasisVerdict::ExtraModel(x) => assert!(!in_finite_dual_class(&x, &e).unwrap()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn a_false_sentence_is_reported() {
        let e = ego("three0").unwrap();
        let s = crate::uhlogic::parse_sentence("! u : -> f(u)=u").unwrap();
        assert!(matches!(validate_basis(&e, &[s], 1).unwrap(), BasisVerdict::FailsInEgo(_)));
    }

    #[test]
    fn dual_class_membership() {
        let e = ego("three_h").unwrap();
        assert!(in_finite_dual_class(e.structure(), &e).unwrap());
        assert!(in_finite_dual_class(&e.structure().power(2).unwrap(), &e).unwrap());
    }
}
