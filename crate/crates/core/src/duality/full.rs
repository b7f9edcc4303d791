//! Duality and full duality at the finite level, checked at an arity bound,
//! the bounded `𝕄_α`, and the enrichment check.
//!
//! Bounded `𝕄_α(n)`: `R` holds the relations of arity `≤ n` that are
//! conjunct-atomic definable from the hom-minimal relations of arity `≤ n`.
//! A domain `s` of arity `j ≤ n` carries operations when it becomes so
//! definable once the total compatible operations `T_j : M^j → M` may be
//! used as terms; then `s` extended by all `T_j` columns is itself in `R_α`
//! (at a larger arity) and every hom on `s` is a hom on that relation
//! composed with members of `T`, so it lies in the clone of `𝕄_α`.

use std::collections::HashSet;

use crate::algebra::{all_tuples, AlterEgo, Elem, FiniteAlgebra, Interp, Relation};
use crate::clone::{structural_reduct_witness, CloneLimits, PartialClone, ReductWitness};
use crate::definability::{describe, hom_minimal_relations, Definer};
use crate::error::{Error, Result};
use crate::par;

use super::report::{Condition, DualityReport, Verdict, Witness};

/// Every hom-minimal relation of arity `≤ n` is in `cadef(E)`.
pub(crate) fn hom_minimal_condition(name: &str, e: &AlterEgo, n: usize) -> Result<Condition> {
    let m = e.algebra();
    let hm = hom_minimal_relations(m, n)?;
    let definer = Definer::new(e, CloneLimits::default());
    let found = par::map(&hm, |r| definer.is_definable(r));
    let mut missing = Vec::new();
    let mut bound = None;
    for (r, ok) in hm.iter().zip(found) {
        match ok {
            Ok(true) => {}
            Ok(false) => missing.push(r),
            Err(Error::BoundExceeded(msg)) => bound = Some(msg),
            Err(err) => return Err(err),
        }
    }
    if !missing.is_empty() {
        let ws = missing.iter().enumerate().map(|(i, r)| Witness::relation(&format!("hm{}", i + 1), r, m.elements())).collect();
        return Ok(Condition::fail(
            name,
            format!("{} of {} hom-minimal relations of arity ≤ {n} are not conjunct-atomic definable", missing.len(), hm.len()),
            ws,
        ));
    }
    if let Some(msg) = bound {
        return Ok(Condition::inconclusive(name, msg));
    }
    Ok(Condition::pass(name, format!("all {} hom-minimal relations of arity ≤ {n} are conjunct-atomic definable", hm.len())))
}

/// `E` is operationally rich at every listed relation.
pub(crate) fn richness_condition(name: &str, e: &AlterEgo, rels: &[(String, Relation)]) -> Result<Condition> {
    let clone = PartialClone::new(e, CloneLimits::default());
    let found = par::map(rels, |(_, r)| clone.richness_witness(r));
    let mut bound = None;
    for ((label, r), w) in rels.iter().zip(found) {
        match w {
            Ok(None) => {}
            Ok(Some(h)) => {
                let els = e.algebra().elements();
                return Ok(Condition::fail(
                    name,
                    format!("not operationally rich at {label} = {}", describe(e.algebra(), r)),
                    vec![Witness::relation("r", r, els), Witness::operation("k", &h, els)],
                ));
            }
            Err(Error::BoundExceeded(msg)) => bound = Some(msg),
            Err(err) => return Err(err),
        }
    }
    match bound {
        Some(msg) => Ok(Condition::inconclusive(name, msg)),
        None => Ok(Condition::pass(name, format!("operationally rich at all {} relations", rels.len()))),
    }
}

pub fn check_finite_duality(e: &AlterEgo, n: usize) -> Result<DualityReport> {
    if n == 0 {
        return Err(Error::Input("the arity bound must be at least 1".into()));
    }
    let mut report = DualityReport::new("duality", e.name()).with_bound("arity", n);
    report.push(hom_minimal_condition("hom-minimal", e, n)?);
    Ok(report)
}

pub fn check_finite_full_duality(e: &AlterEgo, n: usize) -> Result<DualityReport> {
    if n == 0 {
        return Err(Error::Input("the arity bound must be at least 1".into()));
    }
    let mut report = DualityReport::new("full-duality", e.name()).with_bound("arity", n);
    report.push(hom_minimal_condition("3a hom-minimal", e, n)?);
    report.push(richness_condition("3b signature", e, &e.relations_and_domains())?);
    let ra: Vec<(String, Relation)> = alpha_domains(e.algebra(), n)?
        .into_iter()
        .enumerate()
        .map(|(i, r)| (format!("alpha[{}]", i + 1), r))
        .collect();
    report.push(richness_condition("3c alpha domains", e, &ra)?);
    Ok(report)
}

/// Bitsets over `M^j` of every atom built from `rels` and equalities, with
/// the given total term tables as arguments.
struct AtomMasks {
    words: usize,
    masks: Vec<Vec<u64>>,
}

impl AtomMasks {
    fn new(u: usize, j: usize, rels: &[Relation], terms: &[Vec<Elem>]) -> AtomMasks {
        let size = u.pow(j as u32);
        let words = size.div_ceil(64);
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        let mut add = |f: &dyn Fn(usize) -> bool| {
            let mut m = vec![0u64; words];
            for c in 0..size {
                if f(c) {
                    m[c / 64] |= 1 << (c % 64);
                }
            }
            seen.insert(m);
        };
        for a in 0..terms.len() {
            for b in a + 1..terms.len() {
                add(&|c| terms[a][c] == terms[b][c]);
            }
        }
        for r in rels {
            for args in all_tuples(terms.len(), r.arity()) {
                add(&|c| r.contains(&args.iter().map(|&t| terms[t][c]).collect::<Vec<_>>()));
            }
        }
        AtomMasks { words, masks: seen.into_iter().collect() }
    }

    fn mask(&self, r: &Relation) -> Vec<u64> {
        let mut m = vec![0u64; self.words];
        for t in r.tuples() {
            let c = crate::algebra::encode(r.universe(), t);
            m[c / 64] |= 1 << (c % 64);
        }
        m
    }

    /// Whether the conjunction of all atoms true on `r` defines `r`.
    fn closed(&self, r: &Relation) -> bool {
        let s = self.mask(r);
        let mut cl = vec![u64::MAX; self.words];
        for m in &self.masks {
            if s.iter().zip(m).all(|(a, b)| a & !b == 0) {
                cl.iter_mut().zip(m).for_each(|(c, b)| *c &= b);
            }
        }
        let size = r.universe().pow(r.arity() as u32);
        if !size.is_multiple_of(64) {
            let last = self.words - 1;
            cl[last] &= (1u64 << (size % 64)) - 1;
        }
        cl == s
    }
}

fn projections(u: usize, j: usize) -> Vec<Vec<Elem>> {
    (0..j).map(|i| all_tuples(u, j).map(|t| t[i]).collect()).collect()
}

/// Tables of every total compatible operation `M^j → M`, projections first.
fn total_terms(m: &FiniteAlgebra, j: usize) -> Result<Vec<Vec<Elem>>> {
    let mut out = projections(m.size(), j);
    let full = Relation::full(m.size(), j);
    for h in m.hom_set(&full)? {
        let t: Vec<Elem> = all_tuples(m.size(), j).map(|p| h.apply(&p).expect("total")).collect();
        if !out.contains(&t) {
            out.push(t);
        }
    }
    Ok(out)
}

/// Non-empty subuniverses of arity `1..=n` closed under the atoms of
/// `terms(j)`.
fn closed_subuniverses(
    m: &FiniteAlgebra,
    n: usize,
    rels: &[Relation],
    terms: &dyn Fn(usize) -> Result<Vec<Vec<Elem>>>,
) -> Result<Vec<Relation>> {
    let mut out = Vec::new();
    for j in 1..=n {
        let atoms = AtomMasks::new(m.size(), j, rels, &terms(j)?);
        let subs: Vec<Relation> = m.subuniverses(j)?.into_iter().filter(|r| !r.is_empty()).collect();
        let keep = par::map(&subs, |r| atoms.closed(r));
        out.extend(subs.into_iter().zip(keep).filter(|(_, k)| *k).map(|(r, _)| r));
    }
    Ok(out)
}

/// Relations of arity `≤ n` conjunct-atomic definable from the hom-minimal
/// relations of arity `≤ n`.
pub fn r_alpha(m: &FiniteAlgebra, n: usize) -> Result<Vec<Relation>> {
    let hm = hom_minimal_relations(m, n)?;
    closed_subuniverses(m, n, &hm, &|j| Ok(projections(m.size(), j)))
}

/// Relations of arity `≤ n` conjunct-atomic definable from the hom-minimal
/// relations of arity `≤ n` and the total compatible operations as terms.
/// These are the operation domains of the bounded `𝕄_α`.
pub fn alpha_domains(m: &FiniteAlgebra, n: usize) -> Result<Vec<Relation>> {
    let hm = hom_minimal_relations(m, n)?;
    closed_subuniverses(m, n, &hm, &|j| total_terms(m, j))
}

#[derive(Clone, Debug)]
pub struct MAlpha {
    pub ego: AlterEgo,
    pub hom_minimal: Vec<Relation>,
    pub relations: Vec<Relation>,
    pub domains: Vec<Relation>,
}

/// `𝕄_α` bounded at arity `n` (see the module notes).
pub fn build_m_alpha(m: &FiniteAlgebra, n: usize) -> Result<MAlpha> {
    if n == 0 {
        return Err(Error::Input("the arity bound must be at least 1".into()));
    }
    let hm = hom_minimal_relations(m, n)?;
    let relations = closed_subuniverses(m, n, &hm, &|j| Ok(projections(m.size(), j)))?;
    let domains = closed_subuniverses(m, n, &hm, &|j| total_terms(m, j))?;
    let mut symbols: Vec<(String, Interp)> =
        relations.iter().enumerate().map(|(i, r)| (format!("r{}", i + 1), Interp::Relation(r.clone()))).collect();
    let homs = par::map(&domains, |d| m.hom_set(d));
    let mut k = 0;
    for hs in homs {
        for h in hs? {
            if !h.is_projection_restriction() {
                k += 1;
                symbols.push((format!("h{k}"), Interp::Operation(h)));
            }
        }
    }
    let ego = AlterEgo::new(format!("{}_alpha{n}", m.name()), m.clone(), symbols)?;
    Ok(MAlpha { ego, hom_minimal: hm, relations, domains })
}

/// `E1 ⊑ E2` with the obstruction, if any, as a condition.
pub(crate) fn reduct_condition(name: &str, e1: &AlterEgo, e2: &AlterEgo) -> Result<Condition> {
    let els = e1.algebra().elements();
    match structural_reduct_witness(e1, e2) {
        Ok(None) => Ok(Condition::pass(name, format!("{} is a structural reduct of {}", e1.name(), e2.name()))),
        Ok(Some(ReductWitness::Operation(s, h))) => Ok(Condition::fail(
            name,
            format!("`{s}` has no extension in the clone of {}", e2.name()),
            vec![Witness::operation(&s, &h, els)],
        )),
        Ok(Some(ReductWitness::Relation(s, r))) => Ok(Condition::fail(
            name,
            format!("{s} is not conjunct-atomic definable in {}", e2.name()),
            vec![Witness::relation("r", &r, els)],
        )),
        Err(Error::BoundExceeded(msg)) => Ok(Condition::inconclusive(name, msg)),
        Err(err) => Err(err),
    }
}

/// Structural equivalence of two alter egos, both directions as conditions.
pub fn check_structural_equivalence(e1: &AlterEgo, e2: &AlterEgo) -> Result<DualityReport> {
    let mut report = DualityReport::new("structural-equivalence", format!("{} vs {}", e1.name(), e2.name()));
    report.push(reduct_condition("forward", e1, e2)?);
    report.push(reduct_condition("backward", e2, e1)?);
    Ok(report)
}

/// With `E1 ⊑ E2` and `E1` full at the bound: `E2` is full iff it is rich at
/// every relation in `(R2 \ R1) ∪ dom(H2 \ H1)`.
pub fn check_enrichment(e1: &AlterEgo, e2: &AlterEgo, n: usize) -> Result<DualityReport> {
    match structural_reduct_witness(e1, e2)? {
        None => {}
        Some(w) => return Err(Error::Precondition(format!("{} is not a structural reduct of {}: {w:?}", e1.name(), e2.name()))),
    }
    let base = check_finite_full_duality(e1, n)?;
    if !base.passed() {
        return Err(Error::Precondition(format!("{} does not fully dualise at arity bound {n}", e1.name())));
    }
    let rels1: HashSet<&Relation> = e1.relations().into_iter().map(|(_, r)| r).collect();
    let ops1: HashSet<_> = e1.operations().into_iter().map(|(_, h)| h).collect();
    let mut listed = Vec::new();
    for (s, i) in e2.symbols() {
        match i {
            Interp::Relation(r) if !rels1.contains(r) => listed.push((s.name.clone(), r.clone())),
            Interp::Operation(h) if !ops1.contains(h) => listed.push((format!("dom {}", s.name), h.domain().clone())),
            _ => {}
        }
    }
    let mut report = DualityReport::new("enrichment", format!("{} over {}", e2.name(), e1.name())).with_bound("arity", n);
    report.push(richness_condition("new symbols", e2, &listed)?);
    if report.passed() {
        let cross = check_finite_full_duality(e2, n)?;
        let mut c = Condition::pass("cross-check", format!("{} fully dualises at arity bound {n}", e2.name()));
        if cross.verdict != Verdict::Pass {
            c = Condition::fail("cross-check", "the enriched alter ego fails the full duality check", Vec::new());
        }
        report.push(c);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn empty_signature_misses_graph_sigma() {
        let m = catalog::algebra("three").unwrap();
        let e = AlterEgo::new("bare", m.clone(), vec![]).unwrap();
        let r = check_finite_duality(&e, 3).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        let sigma = catalog::ego("three_sigma").unwrap().structure().operation("sigma").unwrap().graph();
        let text = crate::format::write_relation("x", &sigma, m.elements());
        let body: String = text.lines().skip(1).collect::<Vec<_>>().join("\n");
        assert!(r.conditions[0].witnesses.iter().any(|w| w.text.lines().skip(1).collect::<Vec<_>>().join("\n") == body));
    }

    #[test]
    fn duality_for_fixtures() {
        assert!(check_finite_duality(&catalog::ego("three0").unwrap(), 3).unwrap().passed());
        assert!(check_finite_duality(&catalog::ego("Q0").unwrap(), 2).unwrap().passed());
    }

    #[test]
    fn r_alpha_contains_hom_minimal_and_full() {
        let m = catalog::algebra("three").unwrap();
        let ra = r_alpha(&m, 2).unwrap();
        for r in hom_minimal_relations(&m, 2).unwrap() {
            assert!(ra.contains(&r));
        }
        assert!(ra.contains(&Relation::full(3, 2)));
    }

    #[test]
    fn enrichment_of_an_ego_by_itself_is_vacuous() {
        let e = catalog::ego("three_h").unwrap();
        let r = check_enrichment(&e, &e, 2).unwrap();
        assert!(r.passed());
        assert!(r.conditions[0].detail.contains("all 0 relations"));
    }
}
