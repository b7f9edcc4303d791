//! The hom-functors `D = hom(-, M)` and `E = hom(-, 𝕄)` on finite objects,
//! and direct tests of the evaluation maps `e_A` and `ε_X`.
//!
//! On the structure side a substructure `X ≤ 𝕄^k` splits into connected
//! components and `E(X)` is the product of the `E(Xⱼ)`. When the variety of
//! `M` is congruence distributive (a majority term is found), every
//! subalgebra of `M` is directly indecomposable and none is trivial, each
//! hom `E(X) → M` factors through exactly one factor, so `ε_X` is onto iff
//! every `ε_{Xⱼ}` is. Otherwise `X` is tested whole, up to a size cap.

use std::collections::{BTreeSet, HashMap};

use crate::algebra::{all_tuples, encode, AlterEgo, Elem, FiniteAlgebra, FiniteStructure, Interp, Operation, PartialOperation, Relation};
use crate::error::{Error, Result};
use crate::par;
use crate::uhlogic::in_finite_dual_class;

use super::report::{Condition, DualityReport, Witness};

/// Name of a map given by its values.
fn map_name(values: &[Elem], names: &[String]) -> String {
    if values.is_empty() {
        return "e".into();
    }
    if names.iter().all(|n| n.chars().count() == 1) {
        values.iter().map(|&v| names[v].as_str()).collect()
    } else {
        values.iter().map(|&v| names[v].as_str()).collect::<Vec<_>>().join(".")
    }
}

/// The substructure of `m^I` on `points` (maps `I → M`, all of length `|I|`).
fn power_substructure(m: &FiniteStructure, points: &[Vec<Elem>], name: &str) -> Result<FiniteStructure> {
    let n = points.len();
    let index: HashMap<&[Elem], usize> = points.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let width = points.first().map_or(0, Vec::len);
    let mut symbols = Vec::new();
    for (s, interp) in m.signature().symbols().iter().zip(m.interps()) {
        let k = s.arity;
        let it = match interp {
            Interp::Relation(r) => {
                let tuples = all_tuples(n, k).filter(|t| {
                    (0..width).all(|i| r.contains(&t.iter().map(|&p| points[p][i]).collect::<Vec<_>>()))
                });
                Interp::Relation(Relation::new(n, k, tuples)?)
            }
            Interp::Operation(h) => {
                let mut pairs = Vec::new();
                for t in all_tuples(n, k) {
                    let image: Option<Vec<Elem>> =
                        (0..width).map(|i| h.apply(&t.iter().map(|&p| points[p][i]).collect::<Vec<_>>())).collect();
                    let Some(image) = image else { continue };
                    // a nullary operation over an empty index set is the empty map
                    let Some(&v) = index.get(image.as_slice()) else {
                        return Err(Error::Precondition(format!(
                            "`{}` leads outside the hom-set; the structure is not compatible",
                            s.name
                        )));
                    };
                    pairs.push((t, v));
                }
                Interp::Operation(PartialOperation::from_pairs(n, k, pairs)?)
            }
        };
        symbols.push((s.name.clone(), it));
    }
    let names = points.iter().map(|p| map_name(p, m.elements())).collect();
    FiniteStructure::from_symbols(name, names, symbols)
}

/// `D(A) = hom(A, M) ≤ 𝕄^A`.
pub fn dual_of_algebra(a: &FiniteAlgebra, e: &AlterEgo) -> Result<FiniteStructure> {
    if a.size() == 0 {
        return Err(Error::Input("the empty algebra has no dual".into()));
    }
    let homs = a.homs_to(e.algebra())?;
    power_substructure(e.structure(), &homs, &format!("D({})", a.name()))
}

/// `E(X) = hom(X, 𝕄) ≤ M^X`.
pub fn dual_of_structure(x: &FiniteStructure, e: &AlterEgo) -> Result<FiniteAlgebra> {
    let homs = x.homs_to(e.structure())?;
    let m = e.algebra();
    if homs.is_empty() {
        return Err(Error::Precondition(format!("`{}` has no morphism into `{}`", x.name(), e.name())));
    }
    algebra_on_maps(m, &homs, &format!("E({})", x.name()))
}

/// The subalgebra of `M^I` on `points`, which must be closed.
fn algebra_on_maps(m: &FiniteAlgebra, points: &[Vec<Elem>], name: &str) -> Result<FiniteAlgebra> {
    let n = points.len();
    let index: HashMap<&[Elem], usize> = points.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let width = points[0].len();
    let mut ops = Vec::new();
    for (oi, op) in m.ops().iter().enumerate() {
        let mut table = Vec::with_capacity(n.pow(op.arity as u32));
        for t in all_tuples(n, op.arity) {
            let image: Vec<Elem> = (0..width)
                .map(|i| m.apply(oi, &t.iter().map(|&p| points[p][i]).collect::<Vec<_>>()))
                .collect();
            let v = *index.get(image.as_slice()).ok_or_else(|| {
                Error::Precondition(format!("the hom-set is not closed under `{}`", op.name))
            })?;
            table.push(v);
        }
        ops.push(Operation { name: op.name.clone(), arity: op.arity, table });
    }
    let names = points.iter().map(|p| map_name(p, m.elements())).collect();
    FiniteAlgebra::new(name, names, ops)
}

/// Why `e_A : A → ED(A)` is not an isomorphism, if it is not.
pub fn evaluation_failure_algebra(a: &FiniteAlgebra, e: &AlterEgo) -> Result<Option<String>> {
    let homs = a.homs_to(e.algebra())?;
    for x in 0..a.size() {
        for y in x + 1..a.size() {
            if homs.iter().all(|h| h[x] == h[y]) {
                return Ok(Some(format!("e_A identifies {} and {}", a.elements()[x], a.elements()[y])));
            }
        }
    }
    let d = power_substructure(e.structure(), &homs, "D(A)")?;
    let back = d.homs_to(e.structure())?.len();
    if back != a.size() {
        return Ok(Some(format!("|ED(A)| = {back} but |A| = {}", a.size())));
    }
    Ok(None)
}

/// Why `ε_X : X → DE(X)` is not an isomorphism, if it is not. `cap` bounds
/// `|E(X)|`.
pub fn evaluation_failure_structure(x: &FiniteStructure, e: &AlterEgo, cap: usize) -> Result<Option<String>> {
    if !in_finite_dual_class(x, e)? {
        return Ok(Some("ε_X is not an embedding".into()));
    }
    let homs = x.homs_to(e.structure())?;
    if homs.len() > cap {
        return Err(Error::BoundExceeded(format!("|E(X)| = {} is above the cap {cap}", homs.len())));
    }
    let back = if homs.is_empty() {
        0
    } else {
        algebra_on_maps(e.algebra(), &homs, "E(X)")?.homs_to(e.algebra())?.len()
    };
    // E(∅) is the one-element algebra
    let back = if x.size() == 0 { trivial_subalgebras(e.algebra())? } else { back };
    if back != x.size() {
        return Ok(Some(format!("|DE(X)| = {back} but |X| = {}", x.size())));
    }
    Ok(None)
}

fn trivial_subalgebras(m: &FiniteAlgebra) -> Result<usize> {
    Ok(m.subuniverses(1)?.iter().filter(|r| r.len() == 1).count())
}

/// A ternary term operation that is a majority operation, searched
/// breadth first over at most `cap` term tables.
pub fn find_majority_term(m: &FiniteAlgebra, cap: usize) -> Option<String> {
    let u = m.size();
    let size = u * u * u;
    let points: Vec<Vec<Elem>> = all_tuples(u, 3).collect();
    let is_majority = |t: &[u32]| {
        (0..u).all(|x| {
            (0..u).all(|y| {
                t[encode(u, &[x, x, y])] as usize == x
                    && t[encode(u, &[x, y, x])] as usize == x
                    && t[encode(u, &[y, x, x])] as usize == x
            })
        })
    };
    let mut tables: Vec<Vec<u32>> = Vec::new();
    let mut terms: Vec<String> = Vec::new();
    let mut seen: HashMap<Vec<u32>, ()> = HashMap::new();
    for i in 0..3 {
        let t: Vec<u32> = points.iter().map(|p| p[i] as u32).collect();
        seen.insert(t.clone(), ());
        tables.push(t);
        terms.push(["x", "y", "z"][i].to_string());
    }
    let mut old = 0;
    let mut budget: usize = 4_000_000;
    while tables.len() > old {
        let total = tables.len();
        let mut fresh: Vec<(Vec<u32>, String)> = Vec::new();
        for (oi, op) in m.ops().iter().enumerate() {
            let k = op.arity;
            if k == 0 {
                if old == 0 {
                    let t = vec![m.apply(oi, &[]) as u32; size];
                    if seen.insert(t.clone(), ()).is_none() {
                        fresh.push((t, op.name.clone()));
                    }
                }
                continue;
            }
            let mut args = vec![0usize; k];
            let mut vals = vec![0; k];
            let mut stop = false;
            crate::algebra::all_tuples(total, k).for_each(|a| {
                if stop || a.iter().all(|&i| i < old) {
                    return;
                }
                if budget == 0 {
                    stop = true;
                    return;
                }
                budget -= 1;
                args.copy_from_slice(&a);
                let t: Vec<u32> = (0..size)
                    .map(|c| {
                        for q in 0..k {
                            vals[q] = tables[args[q]][c] as Elem;
                        }
                        m.apply(oi, &vals) as u32
                    })
                    .collect();
                if seen.insert(t.clone(), ()).is_none() {
                    let term = format!("{}({})", op.name, args.iter().map(|&i| terms[i].as_str()).collect::<Vec<_>>().join(","));
                    fresh.push((t, term));
                    if total + fresh.len() > cap {
                        stop = true;
                    }
                }
            });
        }
        if let Some((_, term)) = fresh.iter().find(|(t, _)| is_majority(t)) {
            return Some(term.clone());
        }
        if total + fresh.len() > cap || budget == 0 {
            return None;
        }
        old = total;
        for (t, s) in fresh {
            tables.push(t);
            terms.push(s);
        }
    }
    None
}

/// Congruences of `a` as block labellings, by brute force over partitions.
fn congruences(a: &FiniteAlgebra) -> Vec<Vec<usize>> {
    let n = a.size();
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn go(a: &FiniteAlgebra, i: usize, max: usize, labels: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let n = a.size();
        if i == n {
            // compatibility with every one-position change of argument
            let ok = a.ops().iter().enumerate().all(|(oi, op)| {
                all_tuples(n, op.arity).all(|s| {
                    (0..op.arity).all(|p| {
                        let v = labels[a.apply(oi, &s)];
                        let mut t = s.clone();
                        (0..n).filter(|&y| labels[y] == labels[s[p]]).all(|y| {
                            t[p] = y;
                            labels[a.apply(oi, &t)] == v
                        })
                    })
                })
            });
            if ok {
                out.push(labels.clone());
            }
            return;
        }
        for l in 0..=max {
            labels[i] = l;
            go(a, i + 1, if l == max { max + 1 } else { max }, labels, out);
        }
    }
    if n > 0 {
        go(a, 1, 1, &mut labels, &mut out);
    }
    out
}

/// Whether `a` (non-trivial) has no pair of complementary permuting factor
/// congruences.
pub fn is_directly_indecomposable(a: &FiniteAlgebra) -> bool {
    let n = a.size();
    if n < 2 {
        return false;
    }
    let cons = congruences(a);
    let proper: Vec<&Vec<usize>> =
        cons.iter().filter(|c| c.iter().any(|&l| l != c[0]) && (0..n).any(|i| (0..i).any(|j| c[i] == c[j]))).collect();
    for th in &proper {
        for ps in &proper {
            let meet_zero = (0..n).all(|i| (0..i).all(|j| th[i] != th[j] || ps[i] != ps[j]));
            // θ∘ψ = ∇: every pair (i, j) has some k with i θ k ψ j
            let compose_full = meet_zero && (0..n).all(|i| (0..n).all(|j| (0..n).any(|k| th[i] == th[k] && ps[k] == ps[j])));
            if compose_full {
                return false;
            }
        }
    }
    true
}

/// Reason the component-wise test is sound for `e`, or why it is not.
pub fn decomposition_certificate(e: &AlterEgo) -> Result<std::result::Result<String, String>> {
    let m = e.algebra();
    if e.has_nullary() {
        return Ok(Err("the alter ego has nullary operations".into()));
    }
    if trivial_subalgebras(m)? > 0 {
        return Ok(Err("M has a one-element subalgebra".into()));
    }
    for r in m.subuniverses(1)? {
        if r.is_empty() {
            continue;
        }
        if r.len() > 9 {
            return Ok(Err("a subalgebra is too large for the congruence check".into()));
        }
        if !is_directly_indecomposable(&m.subalgebra(&r)?) {
            return Ok(Err(format!("the subalgebra on {} is directly decomposable", crate::definability::describe(m, &r))));
        }
    }
    match find_majority_term(m, 20_000) {
        Some(t) => Ok(Ok(format!("majority term {t}; subalgebras of M directly indecomposable and non-trivial"))),
        None => Ok(Err("no majority term within the search cap".into())),
    }
}

/// Tests `e_A` on every non-empty subalgebra of `M^k` and `ε_X` on every
/// substructure of `𝕄^k` for `1 ≤ k ≤ power`.
pub fn check_evaluation_isos(e: &AlterEgo, power: usize) -> Result<DualityReport> {
    const CAP: usize = 20_000;
    let m = e.algebra();
    let mut report = DualityReport::new("evaluation-isos", e.name()).with_bound("power", power);
    let mut subs = Vec::new();
    for k in 1..=power {
        subs.extend(m.subuniverses(k)?.into_iter().filter(|r| !r.is_empty()));
    }
    let found = par::map(&subs, |r| -> Result<Option<String>> { evaluation_failure_algebra(&m.subalgebra(r)?, e) });
    let mut bad = None;
    for (r, f) in subs.iter().zip(found) {
        if let Some(why) = f? {
            bad = Some((r.clone(), why));
            break;
        }
    }
    report.push(match bad {
        None => Condition::pass("e_A", format!("{} subalgebras of powers of M", subs.len())),
        Some((r, why)) => Condition::fail("e_A", why, vec![Witness::relation("A", &r, m.elements())]),
    });

    let cert = decomposition_certificate(e)?;
    let mut cond = Condition::pass("epsilon_X", "");
    let mut checked = 0;
    'powers: for k in 1..=power {
        let ek = e.structure().power(k)?;
        let subs = match ek.substructures() {
            Ok(s) => s,
            Err(Error::BoundExceeded(msg)) => {
                cond = Condition::inconclusive("epsilon_X", msg);
                break;
            }
            Err(err) => return Err(err),
        };
        let verdicts: Vec<Result<Option<String>>> = match &cert {
            Ok(_) => {
                let mut keys: BTreeSet<Vec<Elem>> = BTreeSet::new();
                let comps: Vec<Vec<Vec<Elem>>> = subs
                    .iter()
                    .map(|(set, x)| x.components().into_iter().map(|c| c.iter().map(|&i| set[i]).collect()).collect())
                    .collect();
                comps.iter().flatten().for_each(|c: &Vec<Elem>| {
                    keys.insert(c.clone());
                });
                let keys: Vec<Vec<Elem>> = keys.into_iter().collect();
                let results = par::map(&keys, |c| {
                    let xc = ek.induced(c).expect("component of a substructure is closed");
                    evaluation_failure_structure(&xc, e, CAP)
                });
                let table: HashMap<&Vec<Elem>, &Result<Option<String>>> = keys.iter().zip(&results).collect();
                comps
                    .iter()
                    .map(|cs| {
                        for c in cs {
                            match table[c] {
                                Ok(None) => {}
                                other => return other.clone(),
                            }
                        }
                        Ok(None)
                    })
                    .collect()
            }
            Err(_) => par::map(&subs, |(_, x)| evaluation_failure_structure(x, e, CAP)),
        };
        for ((_, x), v) in subs.iter().zip(verdicts) {
            checked += 1;
            match v {
                Ok(None) => {}
                Ok(Some(why)) => {
                    cond = Condition::fail("epsilon_X", why, vec![Witness::structure(&x.clone().with_name("X"))]);
                    break 'powers;
                }
                Err(Error::BoundExceeded(msg)) => {
                    if cond.verdict == super::Verdict::Pass {
                        cond = Condition::inconclusive("epsilon_X", msg);
                    }
                }
                Err(err) => return Err(err),
            }
        }
    }
    if cond.verdict == super::Verdict::Pass {
        cond.detail = format!("{checked} substructures of powers of the alter ego");
    }
    cond.detail = match &cert {
        Ok(why) => format!("{}; componentwise ({why})", cond.detail),
        Err(why) => format!("{}; tested whole ({why})", cond.detail),
    };
    report.push(cond);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn endomorphisms_of_three() {
        let d = dual_of_algebra(&catalog::algebra("three").unwrap(), &catalog::ego("three_h").unwrap()).unwrap();
        let mut names = d.elements().to_vec();
        names.sort();
        assert_eq!(names, ["001", "011", "0a1"]);
    }

    #[test]
    fn empty_structure_has_one_point_dual() {
        let e = catalog::ego("three_h").unwrap();
        let x = e.structure().induced(&[]).unwrap();
        assert_eq!(dual_of_structure(&x, &e).unwrap().size(), 1);
        assert_eq!(evaluation_failure_structure(&x, &e, 10).unwrap(), None);
    }

    #[test]
    fn dual_of_ego_is_subalgebra_of_cube() {
        let e = catalog::ego("three_h").unwrap();
        let a = dual_of_structure(e.structure(), &e).unwrap();
        assert_eq!(a.size(), 3);
        assert_eq!(a.elements()[0].len(), 3);
    }

    #[test]
    fn majority_terms() {
        assert!(find_majority_term(&catalog::algebra("three").unwrap(), 20_000).is_some());
        assert!(find_majority_term(&catalog::algebra("Q").unwrap(), 20_000).is_some());
    }

    #[test]
    fn indecomposable_subalgebras() {
        let m = catalog::algebra("three").unwrap();
        assert!(is_directly_indecomposable(&m));
        let sq = m.subalgebra(&Relation::full(3, 2)).unwrap();
        assert!(!is_directly_indecomposable(&sq));
    }
}
