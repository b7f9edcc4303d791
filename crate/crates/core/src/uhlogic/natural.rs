//! Naturalisation φ ↦ φ^♮ of a pure sentence over the first alter ego's
//! language into the second's: every premise atom becomes `β̂_r` over the
//! atom's variables and a fresh block of universal variables, the conclusion
//! becomes `β_r` (existential), equations and ⊥ are kept.

use std::collections::HashMap;
use std::fmt;

use super::eval::{counterexample, HornShape, Query};
use super::purify::is_pure;
use super::syntax::{Atom, Sentence, Term};
use crate::algebra::{AlterEgo, FiniteStructure, Relation, SymbolKind};
use crate::definability::{symbol_relation, Beta, BetaTable};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaturalizedSentence {
    pub original: Sentence,
    /// The original prefix followed by every block.
    pub vars: Vec<String>,
    pub blocks: Vec<Vec<String>>,
    pub premise: Vec<Atom>,
    pub exists: Vec<String>,
    pub conclusion: Vec<Atom>,
}

impl NaturalizedSentence {
    pub fn shape(&self) -> HornShape {
        HornShape {
            vars: self.vars.clone(),
            premise: self.premise.clone(),
            exists: self.exists.clone(),
            conclusion: self.conclusion.clone(),
        }
    }

    /// Number of variables of the original sentence.
    pub fn original_arity(&self) -> usize {
        self.original.vars.len()
    }
}

impl fmt::Display for NaturalizedSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |atoms: &[Atom]| atoms.iter().map(Atom::to_string).collect::<Vec<_>>().join(" & ");
        write!(f, "! {} : {} -> ", self.vars.join(" "), join(&self.premise))?;
        if !self.exists.is_empty() {
            write!(f, "exists {} . ", self.exists.join(" "))?;
        }
        if self.conclusion.is_empty() {
            write!(f, "true")
        } else {
            write!(f, "{}", join(&self.conclusion))
        }
    }
}

/// A variable prefix that no variable of `s` starts with.
fn fresh_prefix(s: &Sentence, base: &str) -> String {
    let mut p = base.to_string();
    while s.vars.iter().any(|v| v.starts_with(&p)) {
        p.push_str(base);
    }
    p
}

fn relation_for(ego1: &AlterEgo, name: &str, want: SymbolKind) -> Result<Relation> {
    let (kind, r) = symbol_relation(ego1, name)?;
    if kind != want {
        return Err(Error::SignatureMismatch(format!("`{name}` is used with the wrong kind")));
    }
    Ok(r)
}

fn beta_for(betas: &BetaTable, name: &str, r: &Relation) -> Result<std::sync::Arc<Beta>> {
    betas.get(r).map_err(|e| match e {
        Error::Precondition(m) => Error::Precondition(format!("no β-formula for `{name}`: {m}")),
        other => other,
    })
}

/// `β̂` (or `β` when `hidden` names the existential block) with its free
/// variables replaced by `args` and its hidden ones by `hidden`.
fn instantiate(beta: &Beta, args: &[String], hidden: &[String]) -> Vec<Atom> {
    let f = &beta.hat_formula;
    let n = beta.arity();
    let map: HashMap<String, String> = f
        .vars
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), if i < n { args[i].clone() } else { hidden[i - n].clone() }))
        .collect();
    f.atoms.iter().map(|a| a.rename(&map)).collect()
}

fn var_args(ts: &[Term]) -> Vec<String> {
    ts.iter().map(|t| t.as_var().expect("pure sentence").to_string()).collect()
}

/// `φ^♮` for a pure sentence `s` in `ego1`'s language, with β-formulas taken
/// from `betas` (built over the second alter ego).
pub fn naturalize(s: &Sentence, ego1: &AlterEgo, betas: &BetaTable) -> Result<NaturalizedSentence> {
    if !is_pure(s) {
        return Err(Error::Input(format!("only pure sentences can be naturalised: {s}")));
    }
    let block_prefix = fresh_prefix(s, "z");
    let exists_prefix = fresh_prefix(s, "y");
    let mut vars = s.vars.clone();
    let mut blocks = Vec::new();
    let mut premise = Vec::new();
    for (i, a) in s.premise.iter().enumerate() {
        let (name, r, args) = match a {
            Atom::Rel(name, ts) => (name, relation_for(ego1, name, SymbolKind::Relation)?, var_args(ts)),
            Atom::Eq(Term::App(h, ts), Term::Var(v)) => {
                let mut args = var_args(ts);
                args.push(v.clone());
                let graph = relation_for(ego1, h, SymbolKind::Operation)?;
                (h, graph, args)
            }
            _ => unreachable!("pure premise"),
        };
        let beta = beta_for(betas, name, &r)?;
        let block: Vec<String> = (1..=beta.hidden()).map(|j| format!("{block_prefix}{}_{j}", i + 1)).collect();
        premise.extend(instantiate(&beta, &args, &block));
        vars.extend(block.iter().cloned());
        blocks.push(block);
    }
    let (exists, conclusion) = match &s.conclusion {
        Atom::Rel(name, ts) => {
            let r = relation_for(ego1, name, SymbolKind::Relation)?;
            let beta = beta_for(betas, name, &r)?;
            let ex: Vec<String> = (1..=beta.hidden()).map(|j| format!("{exists_prefix}{j}")).collect();
            let atoms = instantiate(&beta, &var_args(ts), &ex);
            (ex, atoms)
        }
        Atom::Eq(Term::App(h, ts), _) => {
            let graph = relation_for(ego1, h, SymbolKind::Operation)?;
            let dom = graph.project(&(0..ts.len()).collect::<Vec<_>>());
            let beta = beta_for(betas, h, &dom)?;
            let ex: Vec<String> = (1..=beta.hidden()).map(|j| format!("{exists_prefix}{j}")).collect();
            let atoms = instantiate(&beta, &var_args(ts), &ex);
            (ex, atoms)
        }
        other => (Vec::new(), vec![other.clone()]),
    };
    Ok(NaturalizedSentence { original: s.clone(), vars, blocks, premise, exists, conclusion })
}

pub fn models_naturalized(x: &FiniteStructure, s: &NaturalizedSentence) -> Result<bool> {
    Ok(counterexample(x, &s.shape())?.is_none())
}

/// `Rel_X(φ^♮)`: the premise's solution set over `v̄` and every block.
pub fn naturalized_premise_relation(x: &FiniteStructure, s: &NaturalizedSentence) -> Result<Relation> {
    Ok(Query::new(x, &s.vars, &s.premise)?.relation())
}
