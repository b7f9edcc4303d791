//! Transfer between two alter egos of one algebra: the assumption checks,
//! the sharp functor, the transfer functors and the new-from-old pipeline.

use crate::algebra::{AlterEgo, Elem, FiniteAlgebra, FiniteStructure, Interp, PartialOperation, Relation};
use crate::clone::{for_each_subset, CloneLimits, PartialClone};
use crate::definability::{describe, is_hom_minimal, BetaTable, Definer};
use crate::error::{Error, Result};
use crate::par;
use crate::uhlogic::{
    models, naturalize, naturalized_premise_relation, premise_relation, purify, validate_basis, Atom, BasisVerdict,
    Labelled, NaturalizedSentence, Sentence, Term,
};

use super::full::{check_finite_full_duality, hom_minimal_condition, richness_condition};
use super::report::{Condition, DualityReport, Witness};

/// A pure basis sentence with its label and naturalisation.
#[derive(Clone, Debug)]
pub struct PureSentence {
    pub label: String,
    pub sentence: Sentence,
    pub naturalized: NaturalizedSentence,
}

/// Two alter egos of one algebra, a validated pure basis `Σ₁` for the first,
/// β-tables in both directions and the naturalised basis.
pub struct TransferContext {
    pub ego1: AlterEgo,
    pub ego2: AlterEgo,
    pub basis: Vec<PureSentence>,
    /// β-formulas over `ego2` for the symbols of `ego1`.
    pub betas2: BetaTable,
    /// β-formulas over `ego1` for the symbols of `ego2`.
    pub betas1: BetaTable,
    pub basis_bound: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `T₂₁ = F₁ ∘ S₂`: from models of the second ego's theory to the first.
    TwoToOne,
    /// `T₁₂ = F₂ ∘ S₁`.
    OneToTwo,
}

/// Purifies labelled sentences; a numbered sentence yielding several pure
/// ones gets letter suffixes in order (`1a`, `1b`, …).
pub fn purify_labelled(sentences: &[Labelled]) -> Vec<(String, Sentence)> {
    let mut groups: Vec<(String, Vec<Sentence>)> = Vec::new();
    for (i, l) in sentences.iter().enumerate() {
        let label = l.label.clone().unwrap_or_else(|| format!("s{}", i + 1));
        let pure = purify(&l.sentence);
        match groups.last_mut() {
            Some((g, ss)) if *g == label => ss.extend(pure),
            _ => groups.push((label, pure)),
        }
    }
    let mut out = Vec::new();
    for (label, ss) in groups {
        if ss.len() == 1 {
            out.push((label, ss.into_iter().next().unwrap()));
        } else {
            for (j, s) in ss.into_iter().enumerate() {
                out.push((format!("{label}{}", (b'a' + j as u8) as char), s));
            }
        }
    }
    out
}

impl TransferContext {
    /// Purifies and validates `sentences` as a basis for `ego1` (models up to
    /// `basis_bound` elements) and naturalises them over `ego2`.
    pub fn new(ego1: &AlterEgo, ego2: &AlterEgo, sentences: &[Labelled], basis_bound: usize) -> Result<Self> {
        ego1.same_algebra(ego2)?;
        let pure = purify_labelled(sentences);
        let plain: Vec<Sentence> = pure.iter().map(|(_, s)| s.clone()).collect();
        for s in &plain {
            s.validate(ego1.structure().signature())?;
        }
        match validate_basis(ego1, &plain, basis_bound)? {
            BasisVerdict::Valid { .. } => {}
            BasisVerdict::FailsInEgo(s) => {
                return Err(Error::Precondition(format!("`{}` fails in {}: {s}", ego1.name(), ego1.name())))
            }
            BasisVerdict::ExtraModel(x) => {
                return Err(Error::Precondition(format!(
                    "the sentences have a {}-element model outside the dual class of {}",
                    x.size(),
                    ego1.name()
                )))
            }
        }
        let betas2 = BetaTable::new(ego2, CloneLimits::default());
        let mut basis = Vec::new();
        for (label, s) in pure {
            let naturalized = naturalize(&s, ego1, &betas2)?;
            basis.push(PureSentence { label, sentence: s, naturalized });
        }
        Ok(TransferContext {
            ego1: ego1.clone(),
            ego2: ego2.clone(),
            basis,
            betas2,
            betas1: BetaTable::new(ego1, CloneLimits::default()),
            basis_bound,
        })
    }

    pub fn sentences(&self) -> Vec<Sentence> {
        self.basis.iter().map(|p| p.sentence.clone()).collect()
    }
}

/// Whether the symbol of an atom names the same relation or operation in
/// both egos. Equations and ⊥ always count.
pub fn atom_in_language(a: &Atom, ego1: &AlterEgo, ego2: &AlterEgo) -> bool {
    let name = match a {
        Atom::Rel(r, _) => r,
        Atom::Eq(Term::App(h, _), _) | Atom::Eq(_, Term::App(h, _)) => h,
        Atom::Eq(..) | Atom::False => return true,
    };
    match (ego1.structure().interp(name), ego2.structure().interp(name)) {
        (Some(i1), Some(i2)) => i1 == i2,
        _ => false,
    }
}

/// Drops repeated columns, keeping first occurrences.
pub fn dedupe_columns(r: &Relation) -> Relation {
    let mut keep: Vec<usize> = Vec::new();
    let cols: Vec<Vec<Elem>> = (0..r.arity()).map(|i| r.column(i)).collect();
    for i in 0..r.arity() {
        if !keep.iter().any(|&k| cols[k] == cols[i]) {
            keep.push(i);
        }
    }
    r.project(&keep)
}

/// (hm), (op) and (ax) for the context. (ax) is tried at `Rel_{M_Ω}(φ)`
/// first and at the naturalised premise relation (columns deduplicated)
/// second; only sentences whose conclusion is outside the second ego's
/// language get an `ax` condition.
pub fn check_transfer_assumptions(ctx: &TransferContext, n: usize) -> Result<DualityReport> {
    let e2 = &ctx.ego2;
    let mut report =
        DualityReport::new("transfer-assumptions", format!("{} from {}", e2.name(), ctx.ego1.name()))
            .with_bound("arity", n)
            .with_bound("basis", ctx.basis_bound);
    report.push(hom_minimal_condition("hm", e2, n)?);
    report.push(richness_condition("op", e2, &e2.relations_and_domains())?);
    let triggered: Vec<&PureSentence> =
        ctx.basis.iter().filter(|p| !atom_in_language(&p.sentence.conclusion, &ctx.ego1, e2)).collect();
    let clone = PartialClone::new(e2, CloneLimits::default());
    let conds = par::map(&triggered, |p| ax_condition(ctx, &clone, p));
    for c in conds {
        report.push(c?);
    }
    Ok(report)
}

fn ax_condition(ctx: &TransferContext, clone: &PartialClone, p: &PureSentence) -> Result<Condition> {
    let name = format!("ax {}", p.label);
    let m = ctx.ego1.algebra();
    let rel = premise_relation(ctx.ego1.structure(), &p.sentence)?;
    if rel.is_empty() {
        return Ok(Condition::pass(name, "the premise has no solutions in the first alter ego"));
    }
    let at = |r: &Relation| -> Result<Option<PartialOperation>> { clone.richness_witness(r) };
    match at(&rel) {
        Ok(None) => return Ok(Condition::pass(name, format!("rich at Rel(φ) = {}", describe(m, &rel)))),
        Ok(Some(_)) | Err(Error::BoundExceeded(_)) => {}
        Err(e) => return Err(e),
    }
    let nat = dedupe_columns(&naturalized_premise_relation(ctx.ego2.structure(), &p.naturalized)?);
    match at(&nat) {
        Ok(None) => Ok(Condition::pass(
            name,
            format!("rich at the naturalised premise relation ({} columns after deduplication)", nat.arity()),
        )),
        Ok(Some(h)) => {
            let mut ws = vec![Witness::sentence(&p.sentence)];
            match clone.richness_witness(&rel).ok().flatten() {
                Some(k) => {
                    ws.push(Witness::relation("r", &rel, m.elements()));
                    ws.push(Witness::operation("k", &k, m.elements()));
                }
                None => {
                    ws.push(Witness::relation("r", &nat, m.elements()));
                    ws.push(Witness::operation("k", &h, m.elements()));
                }
            }
            Ok(Condition::fail(
                name,
                format!("{} is not operationally rich at Rel(φ) = {}", ctx.ego2.name(), describe(m, &rel)),
                ws,
            ))
        }
        Err(Error::BoundExceeded(msg)) => Ok(Condition::inconclusive(name, msg)),
        Err(e) => Err(e),
    }
}

/// `S(X)` restricted to `targets`: every target relation `r` is read as the
/// solution set of `β_r` in `X`, every target operation through the graph.
/// `betas` is built over the alter ego whose signature `X` has.
pub fn sharp_enrich(x: &FiniteStructure, betas: &BetaTable, targets: &[(String, Interp)]) -> Result<FiniteStructure> {
    let ego = betas.ego();
    let n = x.size();
    let mut symbols = Vec::new();
    for (name, target) in targets {
        let rel = target.as_relation();
        let beta = betas.get(&rel)?;
        let sol = beta.beta.solutions(x)?;
        let interp = match target {
            Interp::Relation(_) => Interp::Relation(sol),
            Interp::Operation(h) => {
                let op = PartialOperation::from_graph(&sol).map_err(|_| {
                    Error::Precondition(format!("`{name}` is not single-valued on `{}`; it violates the basis", x.name()))
                })?;
                let dom = betas.get(h.domain())?.beta.solutions(x)?;
                if &dom != op.domain() {
                    return Err(Error::Precondition(format!(
                        "the domain of `{name}` on `{}` differs from the enriched domain relation",
                        x.name()
                    )));
                }
                Interp::Operation(op)
            }
        };
        // a symbol that the alter ego already interprets the same way is kept
        if let (Some(mine), Some(xi)) = (ego.structure().interp(name), x.interp(name)) {
            if mine == target && xi != &interp {
                return Err(Error::Precondition(format!("enrichment changes `{name}` on `{}`", x.name())));
            }
        }
        debug_assert_eq!(interp.as_relation().universe(), n);
        symbols.push((name.clone(), interp));
    }
    FiniteStructure::from_symbols(x.name(), x.elements().to_vec(), symbols)
}

fn targets(e: &AlterEgo) -> Vec<(String, Interp)> {
    e.symbols().map(|(s, i)| (s.name.clone(), i.clone())).collect()
}

/// `T₂₁(X)` or `T₁₂(X)`. The image under `T₂₁` is checked against `Σ₁`; an
/// input to `T₁₂` must satisfy `Σ₁`.
pub fn transfer_structure(x: &FiniteStructure, ctx: &TransferContext, dir: Direction) -> Result<FiniteStructure> {
    let sig_check = |y: &FiniteStructure, when: &str| -> Result<()> {
        for p in &ctx.basis {
            if !models(y, &p.sentence)? {
                return Err(Error::Precondition(format!("{when} `{}` fails ({}) {}", y.name(), p.label, p.sentence)));
            }
        }
        Ok(())
    };
    match dir {
        Direction::TwoToOne => {
            let y = sharp_enrich(x, &ctx.betas2, &targets(&ctx.ego1))?;
            sig_check(&y, "the transferred structure")?;
            Ok(y)
        }
        Direction::OneToTwo => {
            sig_check(x, "the input")?;
            sharp_enrich(x, &ctx.betas1, &targets(&ctx.ego2))
        }
    }
}

#[derive(Clone, Debug)]
pub struct NewFromOldOptions {
    pub arity_bound: usize,
    pub basis_bound: usize,
    pub minimize: bool,
}

impl Default for NewFromOldOptions {
    fn default() -> Self {
        NewFromOldOptions { arity_bound: 3, basis_bound: 3, minimize: false }
    }
}

/// One triggered sentence and the operations added for it.
#[derive(Clone, Debug)]
pub struct Added {
    pub label: String,
    pub sentence: Sentence,
    /// `r_i`: `Rel(φ)` when the premise is in the old language, otherwise
    /// the naturalised premise relation projected back onto `φ`'s variables.
    pub relation: Relation,
    /// Coordinates kept by the minimisation, if it applied.
    pub kept: Option<Vec<usize>>,
    /// Names and operations added to the alter ego.
    pub operations: Vec<(String, PartialOperation)>,
}

#[derive(Clone, Debug)]
pub struct NewFromOld {
    pub ego: AlterEgo,
    pub added: Vec<Added>,
    pub report: DualityReport,
}

fn precondition(report: &Condition, what: &str) -> Result<()> {
    if report.verdict == super::Verdict::Pass {
        return Ok(());
    }
    let ws: Vec<&str> = report.witnesses.iter().map(|w| w.text.as_str()).collect();
    Err(Error::Precondition(format!("{what}: {}\n{}", report.detail, ws.join(""))))
}

/// The smallest coordinate set (lexicographically first among the smallest)
/// onto which `r` projects bijectively with an image in `cadef(E0)`.
fn minimal_projection(r: &Relation, definer: &Definer) -> Result<Option<Vec<usize>>> {
    for size in 1..r.arity() {
        let mut hit: Option<Result<Vec<usize>>> = None;
        for_each_subset(r.arity(), size, &mut |theta| {
            if !r.projection_is_injective(theta) {
                return true;
            }
            match definer.is_definable(&r.project(theta)) {
                Ok(true) => {
                    hit = Some(Ok(theta.to_vec()));
                    false
                }
                Ok(false) => true,
                Err(e) => {
                    hit = Some(Err(e));
                    false
                }
            }
        });
        if let Some(h) = hit {
            return h.map(Some);
        }
    }
    Ok(None)
}

/// Transports `h` on `r` along the bijective projection onto `theta`.
fn project_operation(h: &PartialOperation, theta: &[usize]) -> Result<PartialOperation> {
    let pairs = h
        .domain()
        .tuples()
        .iter()
        .zip(h.values())
        .map(|(t, &v)| (theta.iter().map(|&c| t[c]).collect(), v))
        .collect();
    PartialOperation::from_pairs(h.universe(), theta.len(), pairs)
}

fn fresh_name(taken: &dyn Fn(&str) -> bool, base: &str) -> String {
    let mut name = base.to_string();
    let mut k = 2;
    while taken(&name) {
        name = format!("{base}{k}");
        k += 1;
    }
    name
}

/// Adds to `ego0` the compatible partial operations demanded by the
/// sentences of `Σ₁` whose conclusions are outside `ego0`'s language.
pub fn run_new_from_old(
    m: &FiniteAlgebra,
    ego0: &AlterEgo,
    ego1: &AlterEgo,
    sentences: &[Labelled],
    opts: &NewFromOldOptions,
) -> Result<NewFromOld> {
    if ego0.algebra() != m || ego1.algebra() != m {
        return Err(Error::Input(format!("both alter egos must be over `{}`", m.name())));
    }
    let n = opts.arity_bound;
    precondition(&hom_minimal_condition("hm", ego0, n)?, "the starting alter ego does not dualise at the bound")?;
    precondition(
        &richness_condition("op", ego0, &ego0.relations_and_domains())?,
        "the starting alter ego is not rich at its own signature",
    )?;
    for (name, h) in ego0.operations() {
        if h.domain().len() != m.size().pow(h.arity() as u32) {
            return Err(Error::Precondition(format!("`{name}` in the starting alter ego is not total")));
        }
    }
    for (name, r) in ego0.relations() {
        if !is_hom_minimal(m, r)? {
            return Err(Error::Precondition(format!("relation `{name}` in the starting alter ego is not hom-minimal")));
        }
    }
    let ctx = TransferContext::new(ego1, ego0, sentences, opts.basis_bound)?;
    let definer = Definer::new(ego0, CloneLimits::default());
    let mut added: Vec<Added> = Vec::new();
    let mut seen_ops: Vec<PartialOperation> = Vec::new();
    for p in &ctx.basis {
        if atom_in_language(&p.sentence.conclusion, ego1, ego0) {
            continue;
        }
        let premise_in = p.sentence.premise.iter().all(|a| atom_in_language(a, ego1, ego0));
        let relation = if premise_in {
            premise_relation(ego0.structure(), &p.sentence)?
        } else {
            let full = naturalized_premise_relation(ego0.structure(), &p.naturalized)?;
            let own: Vec<usize> = (0..p.naturalized.original_arity()).collect();
            if full.projection_is_injective(&own) {
                full.project(&own)
            } else {
                dedupe_columns(&full)
            }
        };
        if relation.is_empty() {
            continue;
        }
        let homs: Vec<PartialOperation> =
            m.hom_set(&relation)?.into_iter().filter(|h| !h.is_projection_restriction()).collect();
        let kept = if opts.minimize && !homs.is_empty() { minimal_projection(&relation, &definer)? } else { None };
        let mut ops = Vec::new();
        for h in homs {
            let h = match &kept {
                Some(theta) => project_operation(&h, theta)?,
                None => h,
            };
            if !seen_ops.contains(&h) {
                seen_ops.push(h.clone());
                ops.push((String::new(), h));
            }
        }
        added.push(Added { label: p.label.clone(), sentence: p.sentence.clone(), relation, kept, operations: ops });
    }
    let total: usize = added.iter().map(|a| a.operations.len()).sum();
    let mut extra = Vec::new();
    let mut names: Vec<String> = Vec::new();
    let mut k = 0;
    for a in &mut added {
        for (name, h) in &mut a.operations {
            k += 1;
            let base = if total == 1 { "h".to_string() } else { format!("h{k}") };
            let taken = |s: &str| ego0.structure().interp(s).is_some() || names.iter().any(|t| t == s);
            *name = fresh_name(&taken, &base);
            names.push(name.clone());
            extra.push((name.clone(), Interp::Operation(h.clone())));
        }
    }
    let ego = ego0.extended(format!("{}_new", ego0.name()), extra)?;
    let report = check_finite_full_duality(&ego, n)?;
    Ok(NewFromOld { ego, added, report })
}

/// The embedding phenomenon on `𝐐`: `{a}` is a substructure of `ℚ₀`, but
/// the one-to-one transferred inclusion lands on a subset of `ℚ₁` that is
/// not closed under `f`.
pub fn check_embedding_counterexample() -> Result<DualityReport> {
    let q0 = crate::catalog::ego("Q0")?;
    let q1 = crate::catalog::ego("Q1")?;
    let basis = crate::catalog::sentences("basis_Q1")?;
    let mut report = DualityReport::new("embedding-counterexample", "Q0 / Q1");
    let a = q0.algebra().element_index("a").expect("Q has a");
    let b = q0.algebra().element_index("b").expect("Q has b");
    let s0 = q0.structure();
    let s1 = q1.structure();

    let sub = s0.induced(&[a]);
    report.push(match &sub {
        Some(_) => Condition::pass("{a} in Q0", "{a} is a substructure of Q0 (graph_f restricts to the empty relation)"),
        None => Condition::fail("{a} in Q0", "{a} is not closed in Q0", Vec::new()),
    });
    let f = s1.operation("f").expect("Q1 has f");
    report.push(if !s1.is_closed(&[a]) && f.apply(&[a]) == Some(b) {
        Condition::pass("{a} in Q1", "f(a) = b lies outside {a}, so {a} is not a substructure of Q1")
    } else {
        Condition::fail("{a} in Q1", "{a} is closed under f in Q1", Vec::new())
    });

    let ctx = TransferContext::new(&q1, &q0, &basis, 3)?;
    let x = sub.expect("checked above").with_name("X");
    let tx = transfer_structure(&x, &ctx, Direction::TwoToOne)?;
    let tq = transfer_structure(s0, &ctx, Direction::TwoToOne)?;
    let same_top = tq.interps() == s1.interps();
    // the inclusion X → Q0 is the map a ↦ a; its transfer is the same map
    let inclusion = vec![a];
    let is_mor = tx.is_morphism(&inclusion, s1);
    report.push(if same_top && is_mor {
        Condition::pass(
            "transferred inclusion",
            "T(Q0) = Q1 and a ↦ a is a one-to-one morphism T(X) → Q1 whose image {a} is not a substructure",
        )
    } else {
        Condition::fail(
            "transferred inclusion",
            format!("transfer of Q0 matches Q1: {same_top}; inclusion is a morphism: {is_mor}"),
            vec![Witness::structure(&tx)],
        )
    });

    let zero = q0.algebra().element_index("0").expect("Q has 0");
    let one = q0.algebra().element_index("1").expect("Q has 1");
    report.push(if s0.is_closed(&[zero, one]) && s1.is_closed(&[zero, one]) {
        Condition::pass("{0,1}", "{0,1} is a substructure of both Q0 and Q1")
    } else {
        Condition::fail("{0,1}", "{0,1} is not closed in both", Vec::new())
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{ego, sentences};

    fn rel(e: &AlterEgo, tuples: &[&str]) -> Relation {
        let a = e.algebra();
        let ts = tuples.iter().map(|t| t.chars().map(|c| a.element_index(&c.to_string()).unwrap()).collect());
        Relation::new(a.size(), tuples[0].len(), ts).unwrap()
    }

    #[test]
    fn labels_of_the_purified_sigma_basis() {
        let labels: Vec<String> =
            purify_labelled(&sentences("sigma_basis_three").unwrap()).into_iter().map(|(l, _)| l).collect();
        assert_eq!(labels.first().map(String::as_str), Some("1a"));
        assert!(labels.contains(&"2a".to_string()));
        assert_eq!(&labels[labels.len() - 2..], ["3", "4"]);
        let mut sorted = labels.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), labels.len());
    }

    #[test]
    fn q_assumptions_trigger_on_1a_and_2a() {
        let q0 = ego("Q0").unwrap();
        let q1 = ego("Q1").unwrap();
        let ctx = TransferContext::new(&q1, &q0, &sentences("basis_Q1").unwrap(), 3).unwrap();
        let report = check_transfer_assumptions(&ctx, 2).unwrap();
        assert!(report.passed(), "{report}");
        let ax: Vec<&str> =
            report.conditions.iter().filter_map(|c| c.name.strip_prefix("ax ")).collect();
        assert_eq!(ax, ["1a", "2a"]);
        let r1 = premise_relation(q1.structure(), &ctx.basis[0].sentence).unwrap();
        assert_eq!(r1, rel(&q0, &["00", "ab", "11"]));
    }

    #[test]
    fn three0_fails_ax_at_sentence_four() {
        let ctx = TransferContext::new(
            &ego("three_sigma").unwrap(),
            &ego("three0").unwrap(),
            &sentences("sigma_basis_three").unwrap(),
            3,
        )
        .unwrap();
        let report = check_transfer_assumptions(&ctx, 3).unwrap();
        let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(failed, ["ax 4"]);
    }

    #[test]
    fn new_from_old_adds_h() {
        let e0 = ego("three0").unwrap();
        let es = ego("three_sigma").unwrap();
        let basis = sentences("sigma_basis_three").unwrap();
        let plain = run_new_from_old(e0.algebra(), &e0, &es, &basis, &NewFromOldOptions::default()).unwrap();
        let ops: Vec<&PartialOperation> = plain.added.iter().flat_map(|a| a.operations.iter().map(|(_, h)| h)).collect();
        assert_eq!(ops.len(), 1);
        assert_eq!(*ops[0].domain(), rel(&e0, &["00000", "0010a", "011a1", "11111"]));
        assert!(plain.report.passed());
        let min = NewFromOldOptions { minimize: true, ..Default::default() };
        let small = run_new_from_old(e0.algebra(), &e0, &es, &basis, &min).unwrap();
        let h = small.ego.structure().operation("h").expect("one added operation is named h");
        assert_eq!(*h.domain(), rel(&e0, &["00", "0a", "a1", "11"]));
        assert_eq!(h, ego("three_h").unwrap().structure().operation("h").unwrap());
    }

    #[test]
    fn transfer_round_trip_on_three_h() {
        let eh = ego("three_h").unwrap();
        let es = ego("three_sigma").unwrap();
        let ctx = TransferContext::new(&es, &eh, &sentences("sigma_basis_three").unwrap(), 3).unwrap();
        let x = eh.structure();
        let y = transfer_structure(x, &ctx, Direction::TwoToOne).unwrap();
        assert_eq!(y.interps(), es.structure().interps());
        let z = transfer_structure(&y, &ctx, Direction::OneToTwo).unwrap();
        assert_eq!(z.interps(), x.interps());
    }

    #[test]
    fn language_and_dedupe() {
        let e0 = ego("three0").unwrap();
        let es = ego("three_sigma").unwrap();
        let s = crate::uhlogic::parse_sentence("! u v w : sigma(u,v)=w -> f(w)=u").unwrap();
        assert!(!atom_in_language(&s.premise[0], &es, &e0));
        assert!(atom_in_language(&s.conclusion, &es, &e0));
        let r = rel(&e0, &["0000", "0a0a", "1111"]);
        assert_eq!(dedupe_columns(&r), rel(&e0, &["00", "0a", "11"]));
    }

    #[test]
    fn embedding_counterexample() {
        let r = check_embedding_counterexample().unwrap();
        assert!(r.passed(), "{r}");
    }
}
