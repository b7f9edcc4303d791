//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use dualize_core::algebra::{all_tuples, AlterEgo, Elem, FiniteAlgebra, FiniteStructure, Relation};
use dualize_core::catalog;
use dualize_core::clone::{CloneLimits, PartialClone};
use dualize_core::uhlogic::{models, purify, Sentence};

const UNDEF: u32 = u32::MAX;

/// Every relation on `M^k` given by one atom over `x1 … xk`, with terms from
/// the clone fragment of arity `k`.
pub fn atomic_relations(e: &AlterEgo, k: usize) -> Vec<BTreeSet<usize>> {
    let n = e.algebra().size();
    let clone = PartialClone::new(e, CloneLimits::default());
    let terms: Vec<Vec<u32>> = clone.members(k).unwrap().members.iter().map(|m| m.table.clone()).collect();
    let points = n.pow(k as u32);
    let mut out = Vec::new();
    for s in &terms {
        for t in &terms {
            out.push((0..points).filter(|&p| s[p] != UNDEF && s[p] == t[p]).collect());
        }
    }
    for (_, r) in e.relations_and_domains() {
        for args in all_tuples(terms.len(), r.arity()) {
            let set = (0..points)
                .filter(|&p| {
                    let vals: Vec<u32> = args.iter().map(|&a| terms[a][p]).collect();
                    vals.iter().all(|&v| v != UNDEF) && r.contains(&vals.iter().map(|&v| v as Elem).collect::<Vec<_>>())
                })
                .collect();
            out.push(set);
        }
    }
    out
}

pub fn point_set(r: &Relation, n: usize) -> BTreeSet<usize> {
    r.tuples().iter().map(|t| t.iter().fold(0, |acc, &x| acc * n + x)).collect()
}

/// `s` is conjunct-atomic definable iff it is the intersection of the atomic
/// relations containing it.
pub fn oracle_definable(atoms: &[BTreeSet<usize>], s: &BTreeSet<usize>, n: usize, k: usize) -> bool {
    let mut meet: BTreeSet<usize> = (0..n.pow(k as u32)).collect();
    for a in atoms.iter().filter(|a| s.is_subset(a)) {
        meet = meet.intersection(a).copied().collect();
    }
    meet == *s
}

/// All maps `r → M`, kept when they preserve every operation.
pub fn oracle_homs(m: &FiniteAlgebra, r: &Relation) -> BTreeSet<Vec<Elem>> {
    let n = m.size();
    let ts = r.tuples();
    let mut out = BTreeSet::new();
    for vals in all_tuples(n, ts.len()) {
        let ok = (0..m.ops().len()).all(|o| {
            let k = m.ops()[o].arity;
            all_tuples(ts.len(), k).all(|pick| {
                let args: Vec<&[Elem]> = pick.iter().map(|&i| ts[i].as_slice()).collect();
                let image = m.apply_tuples(o, &args, r.arity());
                let at = r.index_of(&image).expect("r is a subuniverse");
                let hv: Vec<Elem> = pick.iter().map(|&i| vals[i]).collect();
                m.apply(o, &hv) == vals[at]
            })
        });
        if ok {
            out.insert(vals);
        }
    }
    out
}

pub fn fixture_sentences() -> Vec<Sentence> {
    let mut out = catalog::basis("sigma_basis_three").unwrap();
    out.extend(catalog::basis("basis_Q1").unwrap());
    out
}

pub fn purify_agrees(x: &FiniteStructure, s: &Sentence) -> bool {
    let whole = models(x, s).unwrap();
    let parts = purify(s).iter().all(|p| models(x, p).unwrap());
    whole == parts
}

pub fn speaks(x: &FiniteStructure, s: &Sentence) -> bool {
    s.symbols().iter().all(|n| x.interp(n).is_some())
}
