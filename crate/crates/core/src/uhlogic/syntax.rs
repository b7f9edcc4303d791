use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::algebra::{Signature, SymbolKind};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Rel(String, Vec<Term>),
    Eq(Term, Term),
    /// ⊥. Allowed as a conclusion; in a premise it makes the sentence vacuous.
    False,
}

/// `∀ vars [ premise₁ & … → conclusion ]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sentence {
    pub vars: Vec<String>,
    pub premise: Vec<Atom>,
    pub conclusion: Atom,
}

/// A sentence with the optional `[label]` it carried in a sentence file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labelled {
    pub label: Option<String>,
    pub sentence: Sentence,
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn app(symbol: &str, args: Vec<Term>) -> Term {
        Term::App(symbol.to_string(), args)
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::App(..) => None,
        }
    }

    /// `h(v₁, …, vₙ)` with variable arguments only.
    pub fn is_flat_app(&self) -> bool {
        matches!(self, Term::App(_, args) if args.iter().all(Term::is_var))
    }

    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn collect_symbols(&self, out: &mut BTreeSet<String>) {
        if let Term::App(h, args) = self {
            out.insert(h.clone());
            args.iter().for_each(|a| a.collect_symbols(out));
        }
    }

    pub fn rename(&self, map: &HashMap<String, String>) -> Term {
        match self {
            Term::Var(v) => Term::Var(map.get(v).cloned().unwrap_or_else(|| v.clone())),
            Term::App(h, args) => Term::App(h.clone(), args.iter().map(|a| a.rename(map)).collect()),
        }
    }

    fn validate(&self, sig: &Signature) -> Result<()> {
        if let Term::App(h, args) = self {
            check_symbol(sig, h, SymbolKind::Operation, args.len())?;
            args.iter().try_for_each(|a| a.validate(sig))?;
        }
        Ok(())
    }
}

fn check_symbol(sig: &Signature, name: &str, kind: SymbolKind, arity: usize) -> Result<()> {
    let s = sig.get(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
    if s.kind != kind {
        let what = match s.kind {
            SymbolKind::Relation => "a relation",
            SymbolKind::Operation => "an operation",
        };
        return Err(Error::SignatureMismatch(format!("`{name}` is {what} symbol")));
    }
    if s.arity != arity {
        return Err(Error::ArityMismatch { symbol: name.to_string(), expected: s.arity, found: arity });
    }
    Ok(())
}

impl Atom {
    /// `h(t̄) = h(t̄)`, read as "t̄ ∈ dom h".
    pub fn def(t: Term) -> Atom {
        Atom::Eq(t.clone(), t)
    }

    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Atom::Rel(_, ts) => ts.iter().for_each(|t| t.collect_vars(out)),
            Atom::Eq(s, t) => {
                s.collect_vars(out);
                t.collect_vars(out);
            }
            Atom::False => {}
        }
    }

    pub fn collect_symbols(&self, out: &mut BTreeSet<String>) {
        match self {
            Atom::Rel(r, ts) => {
                out.insert(r.clone());
                ts.iter().for_each(|t| t.collect_symbols(out));
            }
            Atom::Eq(s, t) => {
                s.collect_symbols(out);
                t.collect_symbols(out);
            }
            Atom::False => {}
        }
    }

    pub fn symbols(&self) -> BTreeSet<String> {
        let mut s = BTreeSet::new();
        self.collect_symbols(&mut s);
        s
    }

    pub fn rename(&self, map: &HashMap<String, String>) -> Atom {
        match self {
            Atom::Rel(r, ts) => Atom::Rel(r.clone(), ts.iter().map(|t| t.rename(map)).collect()),
            Atom::Eq(s, t) => Atom::Eq(s.rename(map), t.rename(map)),
            Atom::False => Atom::False,
        }
    }

    pub fn validate(&self, sig: &Signature) -> Result<()> {
        match self {
            Atom::Rel(r, ts) => {
                check_symbol(sig, r, SymbolKind::Relation, ts.len())?;
                ts.iter().try_for_each(|t| t.validate(sig))
            }
            Atom::Eq(s, t) => {
                s.validate(sig)?;
                t.validate(sig)
            }
            Atom::False => Ok(()),
        }
    }
}

impl Sentence {
    pub fn new(vars: &[&str], premise: Vec<Atom>, conclusion: Atom) -> Sentence {
        Sentence { vars: vars.iter().map(|s| s.to_string()).collect(), premise, conclusion }
    }

    /// Symbols occurring anywhere in the sentence.
    pub fn symbols(&self) -> BTreeSet<String> {
        let mut s = BTreeSet::new();
        self.premise.iter().for_each(|a| a.collect_symbols(&mut s));
        self.conclusion.collect_symbols(&mut s);
        s
    }

    pub fn premise_symbols(&self) -> BTreeSet<String> {
        let mut s = BTreeSet::new();
        self.premise.iter().for_each(|a| a.collect_symbols(&mut s));
        s
    }

    /// Checks symbols and arities against `sig`, and that every variable is
    /// bound by the prefix.
    pub fn validate(&self, sig: &Signature) -> Result<()> {
        self.premise.iter().try_for_each(|a| a.validate(sig))?;
        self.conclusion.validate(sig)?;
        let mut used = Vec::new();
        self.premise.iter().for_each(|a| a.collect_vars(&mut used));
        self.conclusion.collect_vars(&mut used);
        if let Some(v) = used.iter().find(|v| !self.vars.contains(v)) {
            return Err(Error::Input(format!("variable `{v}` is not bound")));
        }
        Ok(())
    }

    /// Renames variables to `v1, v2, …` by first occurrence (premise first,
    /// then conclusion, then unused prefix variables) and orders the prefix
    /// accordingly. Two sentences equal up to renaming normalise equally.
    pub fn normalized(&self) -> Sentence {
        let mut order = Vec::new();
        self.premise.iter().for_each(|a| a.collect_vars(&mut order));
        self.conclusion.collect_vars(&mut order);
        for v in &self.vars {
            if !order.contains(v) {
                order.push(v.clone());
            }
        }
        let map: HashMap<String, String> = order
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), format!("v{}", i + 1)))
            .collect();
        Sentence {
            vars: order.iter().map(|v| map[v].clone()).collect(),
            premise: self.premise.iter().map(|a| a.rename(&map)).collect(),
            conclusion: self.conclusion.rename(&map),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(h, args) => {
                write!(f, "{h}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Rel(r, ts) => write!(f, "{}", Term::App(r.clone(), ts.clone())),
            Atom::Eq(s, t) => write!(f, "{s}={t}"),
            Atom::False => write!(f, "false"),
        }
    }
}

pub(crate) fn write_conjunction(f: &mut fmt::Formatter<'_>, atoms: &[Atom]) -> fmt::Result {
    if atoms.is_empty() {
        return write!(f, "true");
    }
    for (i, a) in atoms.iter().enumerate() {
        if i > 0 {
            write!(f, " & ")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "!")?;
        for v in &self.vars {
            write!(f, " {v}")?;
        }
        write!(f, " : ")?;
        write_conjunction(f, &self.premise)?;
        write!(f, " -> {}", self.conclusion)
    }
}

impl fmt::Display for Labelled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = &self.label {
            write!(f, "[{l}] ")?;
        }
        write!(f, "{}", self.sentence)
    }
}

/// Text form of a sentence, the inverse of `parse_sentence`.
pub fn print_sentence(s: &Sentence) -> String {
    s.to_string()
}
