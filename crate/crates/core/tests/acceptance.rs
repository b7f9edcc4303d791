//! One line per acceptance criterion. Runs without the libtest harness so the
//! lines always reach the terminal; exits non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use dualize_core::algebra::{AlterEgo, Relation};
use dualize_core::catalog::{self, algebra, ego, sentences};
use dualize_core::definability::{cadef_define, is_hom_minimal};
use dualize_core::duality::{
    build_m_alpha, check_embedding_counterexample, check_evaluation_isos, check_finite_full_duality,
    check_structural_equivalence, check_transfer_assumptions, purify_labelled, run_new_from_old, transfer_structure,
    Direction, NewFromOldOptions, TransferContext,
};
use dualize_core::clone::is_structural_reduct;
use dualize_core::uhlogic::{in_finite_dual_class, parse_sentence, premise_relation, purify, Sentence};
use dualize_core::Result;

const ONE_SECOND: Duration = Duration::from_secs(1);
const SIXTY_SECONDS: Duration = Duration::from_secs(60);

fn rel(e: &AlterEgo, tuples: &[&str]) -> Relation {
    let a = e.algebra();
    let ts = tuples.iter().map(|t| t.chars().map(|c| a.element_index(&c.to_string()).unwrap()).collect());
    Relation::new(a.size(), tuples[0].len(), ts).unwrap()
}

fn compact(e: &AlterEgo, r: &Relation) -> String {
    let els = e.algebra().elements();
    let ts: Vec<String> = r.tuples().iter().map(|t| t.iter().map(|&x| els[x].as_str()).collect()).collect();
    format!("{{{}}}", ts.join(", "))
}

fn r5(e: &AlterEgo) -> Relation {
    rel(e, &["00000", "0010a", "011a1", "11111"])
}

type Outcome = Result<(bool, String)>;
type Criterion = (&'static str, fn() -> Outcome);

fn c1() -> Outcome {
    let three = algebra("three")?;
    let e = ego("three0")?;
    let start = Instant::now();
    let n = three.hom_set(&r5(&e))?.len();
    let t = start.elapsed();
    Ok((n == 6 && t < ONE_SECOND, format!("|hom(r5, 3)| = {n}, want 6, in {t:.2?} (limit 1s)")))
}

fn c2() -> Outcome {
    let e = ego("three0")?;
    let s = parse_sentence("! u v w x y : f(x)=u & g(x)=v & f(y)=v & g(y)=w -> u=u")?;
    let r = premise_relation(e.structure(), &s)?;
    Ok((r == r5(&e), format!("Rel(4') in three0 = {}", compact(&e, &r))))
}

fn same(a: &[Sentence], b: &[&str]) -> bool {
    let mut x: Vec<Sentence> = a.iter().map(Sentence::normalized).collect();
    let mut y: Vec<Sentence> = b.iter().map(|s| parse_sentence(s).unwrap().normalized()).collect();
    x.sort_by_key(|s| s.to_string());
    y.sort_by_key(|s| s.to_string());
    x == y
}

fn c3() -> Outcome {
    let basis = catalog::basis("basis_Q1")?;
    let one = same(&purify(&basis[0]), &["! u v : f(u)=v -> g(v)=g(v)", "! u v w : f(u)=v & g(v)=w -> w=u"]);
    let two = same(&purify(&basis[1]), &["! u v : g(u)=v -> f(v)=f(v)", "! u v w : g(u)=v & f(v)=w -> w=u"]);
    let three = purify(&basis[2]) == vec![basis[2].clone()];
    let labels: Vec<String> = purify_labelled(&sentences("basis_Q1")?).into_iter().map(|(l, _)| l).collect();
    let ok = one && two && three && labels == ["1a", "1b", "2a", "2b", "3"];
    Ok((ok, format!("(1) -> {one}, (2) -> {two}, (3) unchanged {three}; labels {}", labels.join(" "))))
}

fn c4() -> Outcome {
    let three = algebra("three")?;
    let q = algebra("Q")?;
    let e3 = ego("three0")?;
    let q0 = ego("Q0")?;
    let sigma = is_hom_minimal(&three, &rel(&e3, &["000", "01a", "111"]))?;
    let f = is_hom_minimal(&q, &rel(&q0, &["00", "ab", "11"]))?;
    let carrier = is_hom_minimal(&three, &rel(&e3, &["0", "a", "1"]))?;
    Ok((sigma && f && !carrier, format!("graph sigma {sigma}, graph f {f}, carrier of 3 {carrier}")))
}

fn c5() -> Outcome {
    let start = Instant::now();
    let h = check_finite_full_duality(&ego("three_h")?, 3)?;
    let q0 = check_finite_full_duality(&ego("Q0")?, 2)?;
    let bad = check_finite_full_duality(&ego("three0")?, 3)?;
    let witness = bad.failures().find(|c| !c.witnesses.is_empty()).map(|c| c.witnesses[0].text.replace('\n', " "));
    let eh = check_evaluation_isos(&ego("three_h")?, 2)?;
    let eq = check_evaluation_isos(&ego("Q0")?, 2)?;
    let t = start.elapsed();
    let ok = h.passed() && q0.passed() && !bad.passed() && witness.is_some() && eh.passed() && eq.passed() && t < SIXTY_SECONDS;
    Ok((
        ok,
        format!(
            "three_h {}, Q0 {}, three0 {} (witness {}), evaluation three_h {}, Q0 {}, in {t:.2?} (limit 60s)",
            h.verdict,
            q0.verdict,
            bad.verdict,
            witness.unwrap_or_else(|| "none".into()),
            eh.verdict,
            eq.verdict
        ),
    ))
}

fn c6() -> Outcome {
    let ma = build_m_alpha(&algebra("three")?, 3)?;
    let h = ego("three_h")?;
    let eq = check_structural_equivalence(&ma.ego, &h)?;
    let sigma = ego("three_sigma")?.structure().interp("sigma").unwrap().clone();
    let h_sigma = h.extended("three_h_sigma", vec![("sigma".into(), sigma)])?;
    // clo(three_h + sigma) at arity 3 is past the clone bound, so the reduct
    // claim goes through three_h
    let reduct = is_structural_reduct(&h, &h_sigma)?;
    let ok = eq.passed() && reduct;
    Ok((ok, format!("M_alpha(3, 3) vs three_h {}; hence a reduct of three_h + sigma {reduct}", eq.verdict)))
}

fn c7() -> Outcome {
    let e0 = ego("three0")?;
    let es = ego("three_sigma")?;
    let basis = sentences("sigma_basis_three")?;
    let plain = run_new_from_old(e0.algebra(), &e0, &es, &basis, &NewFromOldOptions::default())?;
    let ops: Vec<_> = plain.added.iter().flat_map(|a| a.operations.iter()).collect();
    let plain_ok = ops.len() == 1 && *ops[0].1.domain() == r5(&e0) && plain.report.passed();
    let opts = NewFromOldOptions { minimize: true, ..Default::default() };
    let min = run_new_from_old(e0.algebra(), &e0, &es, &basis, &opts)?;
    let ops: Vec<_> = min.added.iter().flat_map(|a| a.operations.iter()).collect();
    let dom_h = rel(&e0, &["00", "0a", "a1", "11"]);
    let min_ok = ops.len() == 1 && *ops[0].1.domain() == dom_h && min.report.passed();
    Ok((plain_ok && min_ok, format!("one operation on r5 {plain_ok}; minimised onto dom h {min_ok}")))
}

fn c8() -> Outcome {
    let eh = ego("three_h")?;
    let es = ego("three_sigma")?;
    let ctx = TransferContext::new(&es, &eh, &sentences("sigma_basis_three")?, 3)?;
    let subs = eh.structure().power(2)?.substructures()?;
    let mut good = 0;
    for (_, x) in &subs {
        let y = transfer_structure(x, &ctx, Direction::TwoToOne)?;
        let z = transfer_structure(&y, &ctx, Direction::OneToTwo)?;
        if in_finite_dual_class(&y, &es)? && z.interps() == x.interps() {
            good += 1;
        }
    }
    Ok((good == subs.len(), format!("{good} of {} substructures of three_h^2 round-trip", subs.len())))
}

fn c9() -> Outcome {
    let q0 = ego("Q0")?;
    let q1 = ego("Q1")?;
    let ctx = TransferContext::new(&q1, &q0, &sentences("basis_Q1")?, 3)?;
    let report = check_transfer_assumptions(&ctx, 2)?;
    let ax: Vec<&str> = report.conditions.iter().filter_map(|c| c.name.strip_prefix("ax ")).collect();
    let rel_of = |label: &str| -> Result<Relation> {
        let p = ctx.basis.iter().find(|p| p.label == label).expect("label");
        premise_relation(q1.structure(), &p.sentence)
    };
    let graph_f = q0.structure().relation("graph_f").unwrap().clone();
    let graph_g = q1.structure().operation("g").unwrap().graph();
    let rels = rel_of("1a")? == graph_f && rel_of("2a")? == graph_g;
    let ok = report.passed() && ax == ["1a", "2a"] && rels;
    Ok((ok, format!("assumptions {}; (ax) on {}; Rel = graph f, graph g {rels}", report.verdict, ax.join(" "))))
}

fn c10() -> Outcome {
    let mut cadef = 0;
    for name in ["three0", "three_sigma", "three_h", "Q0", "Q1"] {
        let e = ego(name)?;
        let n = e.algebra().size();
        for k in 1..=2 {
            let atoms = atomic_relations(&e, k);
            for s in e.algebra().subuniverses(k)? {
                if cadef_define(&e, &s)?.is_some() != oracle_definable(&atoms, &point_set(&s, n), n, k) {
                    return Ok((false, format!("cadef disagrees in {name} at {s:?}")));
                }
                cadef += 1;
            }
        }
    }
    let mut homs = 0;
    for name in ["three", "Q"] {
        let m = algebra(name)?;
        for k in 1..=3 {
            for r in m.subuniverses(k)?.into_iter().filter(|r| r.len() <= 8) {
                let got: std::collections::BTreeSet<_> = m.hom_set(&r)?.iter().map(|h| h.values().to_vec()).collect();
                if got != oracle_homs(&m, &r) {
                    return Ok((false, format!("hom_set disagrees on {r:?}")));
                }
                homs += 1;
            }
        }
    }
    let mut pure = 0;
    for name in ["three0", "three_sigma", "three_h", "Q0", "Q1"] {
        let e = ego(name)?;
        let mut xs = vec![e.structure().clone(), e.structure().power(2)?];
        xs.extend(e.structure().substructures()?.into_iter().map(|(_, x)| x));
        for x in &xs {
            for s in fixture_sentences().iter().filter(|s| speaks(x, s)) {
                if !purify_agrees(x, s) {
                    return Ok((false, format!("purify changes the truth of {s} in {}", x.name())));
                }
                pure += 1;
            }
        }
    }
    Ok((true, format!("{cadef} cadef, {homs} hom-set and {pure} purify comparisons (random cases in the oracles target)")))
}

fn c11() -> Outcome {
    let r = check_embedding_counterexample()?;
    Ok((r.passed(), format!("{} conditions, verdict {}", r.conditions.len(), r.verdict)))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("hom count on r5", c1),
        ("premise relation of (4')", c2),
        ("purifier on the Q basis", c3),
        ("hom-minimality", c4),
        ("full-duality verdicts", c5),
        ("M_alpha reproduction", c6),
        ("new-from-old on three", c7),
        ("transfer round trip", c8),
        ("transfer assumptions for Q", c9),
        ("oracle equivalences", c10),
        ("embedding counterexample", c11),
    ];
    let mut passed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (ok, detail) = match f() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        println!("criterion {:>2} {} {name}: {detail}", i + 1, if ok { "PASS" } else { "FAIL" });
        passed.push(ok);
    }
    let shadows = passed[4..8].iter().all(|&p| p);
    println!(
        "criterion 12 {} declared: the infinite-level claims (three_sigma not standard, three_h not fully dualising) \
         are not machine-verified; their finite-level shadows are criteria 5-8",
        if shadows { "PASS" } else { "FAIL" }
    );
    passed.push(shadows);
    let failed = passed.iter().filter(|&&p| !p).count();
    println!("{} of 12 criteria pass", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

