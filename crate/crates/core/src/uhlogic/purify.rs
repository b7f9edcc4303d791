//! Rewriting a uH-sentence into an equivalent conjunction of pure ones.
//!
//! A premise atom is pure when it is `r(v̄)` or `h(v̄)=v` with variables only;
//! a conclusion is pure when it is `r(v̄)`, `h(v̄)=h(v̄)`, `u=v` or ⊥. Rules
//! are tried in order (0)–(6) on the first offending position, scanning the
//! premise left to right before the conclusion:
//!
//! 0. premise `u=v`: drop it and replace `v` by `u` everywhere
//! 1. premise `r(t̄)` with a compound argument: `r(w̄) & t₁=w₁ & …`
//! 2. premise `s=t` with `t` compound: `s=w & t=w`
//! 3. premise `h(t̄)=v` with a compound argument: `h(w̄)=v & t₁=w₁ & …`
//! 4. conclusion `r(t̄)` with a compound argument: definedness of each `tⱼ`,
//!    then `… & t₁=w₁ & … → r(w̄)`
//! 5. conclusion `s=t`, distinct, one compound: definedness of `s` and `t`,
//!    then `… & s=w & t=w' → w=w'`
//! 6. conclusion `h(t̄)=h(t̄)` with a compound argument: as in 4
//!
//! New atoms go to the end of the premise. Outputs are post-processed: repeated
//! premise atoms are merged, and sentences that are valid outright (conclusion
//! `u=u`, conclusion already among the premises or implied by a premise
//! `h(v̄)=w`, or ⊥ in the premise) are dropped, as are duplicates.

use std::collections::HashMap;

use super::syntax::{Atom, Sentence, Term};

fn is_premise_pure(a: &Atom) -> bool {
    match a {
        Atom::Rel(_, ts) => ts.iter().all(Term::is_var),
        Atom::Eq(s, t) => s.is_flat_app() && t.is_var(),
        Atom::False => false,
    }
}

fn is_conclusion_pure(a: &Atom) -> bool {
    match a {
        Atom::Rel(_, ts) => ts.iter().all(Term::is_var),
        Atom::Eq(s, t) => (s.is_var() && t.is_var()) || (s == t && s.is_flat_app()),
        Atom::False => true,
    }
}

/// Whether every premise atom and the conclusion have the pure shapes.
pub fn is_pure(s: &Sentence) -> bool {
    s.premise.iter().all(is_premise_pure) && is_conclusion_pure(&s.conclusion)
}

struct Fresh<'a> {
    s: &'a mut Sentence,
}

impl Fresh<'_> {
    /// A new variable `wₖ` not yet bound, appended to the prefix.
    fn var(&mut self) -> Term {
        let mut k = 1;
        loop {
            let name = format!("w{k}");
            let clash = self.s.vars.contains(&name) || {
                let mut used = Vec::new();
                self.s.premise.iter().for_each(|a| a.collect_vars(&mut used));
                self.s.conclusion.collect_vars(&mut used);
                used.contains(&name)
            };
            if !clash {
                self.s.vars.push(name.clone());
                return Term::Var(name);
            }
            k += 1;
        }
    }
}

fn with_premise(s: &Sentence, extra: Vec<Atom>, conclusion: Atom) -> Sentence {
    let mut premise = s.premise.clone();
    premise.extend(extra);
    Sentence { vars: s.vars.clone(), premise, conclusion }
}

/// One rewriting step, or `None` when `s` is pure.
fn step(s: &Sentence) -> Option<Vec<Sentence>> {
    if let Some(k) = s.premise.iter().position(|a| !is_premise_pure(a)) {
        let mut t = s.clone();
        let atom = t.premise.remove(k);
        match atom {
            // (0)
            Atom::Eq(Term::Var(a), Term::Var(b)) => {
                if a != b {
                    let map = HashMap::from([(b.clone(), a.clone())]);
                    t.premise = t.premise.iter().map(|x| x.rename(&map)).collect();
                    t.conclusion = t.conclusion.rename(&map);
                    t.vars.retain(|v| v != &b);
                }
                Some(vec![t])
            }
            // (1)
            Atom::Rel(r, ts) => {
                let mut f = Fresh { s: &mut t };
                let ws: Vec<Term> = ts.iter().map(|_| f.var()).collect();
                t.premise.push(Atom::Rel(r, ws.clone()));
                t.premise.extend(ts.into_iter().zip(ws).map(|(tj, wj)| Atom::Eq(tj, wj)));
                Some(vec![t])
            }
            // (2)
            Atom::Eq(lhs, rhs) if !rhs.is_var() => {
                let w = Fresh { s: &mut t }.var();
                t.premise.push(Atom::Eq(lhs, w.clone()));
                t.premise.push(Atom::Eq(rhs, w));
                Some(vec![t])
            }
            // (3)
            Atom::Eq(Term::App(h, ts), v) => {
                let mut f = Fresh { s: &mut t };
                let ws: Vec<Term> = ts.iter().map(|_| f.var()).collect();
                t.premise.push(Atom::Eq(Term::App(h, ws.clone()), v));
                t.premise.extend(ts.into_iter().zip(ws).map(|(tj, wj)| Atom::Eq(tj, wj)));
                Some(vec![t])
            }
            Atom::False => unreachable!("removed before rewriting"),
            Atom::Eq(Term::Var(_), Term::App(..)) => unreachable!("caught by (2)"),
        }
    } else if !is_conclusion_pure(&s.conclusion) {
        match &s.conclusion {
            // (4)
            Atom::Rel(r, ts) => Some(spread(s, ts, |ws| Atom::Rel(r.clone(), ws))),
            // (6)
            Atom::Eq(lhs @ Term::App(h, ts), rhs) if lhs == rhs => {
                Some(spread(s, ts, |ws| Atom::def(Term::App(h.clone(), ws))))
            }
            // (5)
            Atom::Eq(..) => Some(rule5(s)),
            Atom::False => unreachable!("⊥ is pure"),
        }
    } else {
        None
    }
}

/// (4)/(6): definedness of each argument, then the atom over fresh variables.
fn spread(s: &Sentence, ts: &[Term], rebuild: impl Fn(Vec<Term>) -> Atom) -> Vec<Sentence> {
    let mut out: Vec<Sentence> = ts.iter().map(|tj| with_premise(s, vec![], Atom::def(tj.clone()))).collect();
    let mut t = s.clone();
    let mut f = Fresh { s: &mut t };
    let ws: Vec<Term> = ts.iter().map(|_| f.var()).collect();
    let eqs = ts.iter().cloned().zip(ws.iter().cloned()).map(|(tj, wj)| Atom::Eq(tj, wj)).collect();
    out.push(with_premise(&t, eqs, rebuild(ws)));
    out
}

/// (5): conclusion `s=t` with distinct sides, at least one compound.
fn rule5(s: &Sentence) -> Vec<Sentence> {
    let Atom::Eq(l, r) = &s.conclusion else { unreachable!() };
    let mut t = s.clone();
    let w = Fresh { s: &mut t }.var();
    let w2 = Fresh { s: &mut t }.var();
    vec![
        with_premise(s, vec![], Atom::def(l.clone())),
        with_premise(s, vec![], Atom::def(r.clone())),
        with_premise(&t, vec![Atom::Eq(l.clone(), w.clone()), Atom::Eq(r.clone(), w2.clone())], Atom::Eq(w, w2)),
    ]
}

fn dedup_premise(s: &mut Sentence) {
    let mut seen = Vec::new();
    s.premise.retain(|a| {
        if seen.contains(a) {
            false
        } else {
            seen.push(a.clone());
            true
        }
    });
}

fn is_tautology(s: &Sentence) -> bool {
    if s.premise.contains(&Atom::False) || s.premise.contains(&s.conclusion) {
        return true;
    }
    match &s.conclusion {
        Atom::Eq(a, b) if a == b => match a {
            Term::Var(_) => true,
            Term::App(..) => s.premise.iter().any(|p| matches!(p, Atom::Eq(l, _) if l == a)),
        },
        _ => false,
    }
}

/// Equivalent pure sentences. A sentence that is already pure comes back
/// unchanged (up to merging repeated premise atoms).
pub fn purify(s: &Sentence) -> Vec<Sentence> {
    let mut out: Vec<Sentence> = Vec::new();
    let mut stack = vec![s.clone()];
    while let Some(mut cur) = stack.pop() {
        dedup_premise(&mut cur);
        if cur.premise.contains(&Atom::False) {
            continue;
        }
        match step(&cur) {
            Some(next) => stack.extend(next.into_iter().rev()),
            None => {
                if !is_tautology(&cur) && !out.iter().any(|o| o.normalized() == cur.normalized()) {
                    out.push(cur);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uhlogic::parser::parse_sentence;

    fn p(s: &str) -> Sentence {
        parse_sentence(s).unwrap()
    }

    fn same(a: &[Sentence], b: &[Sentence]) -> bool {
        let na: Vec<_> = a.iter().map(Sentence::normalized).collect();
        let nb: Vec<_> = b.iter().map(Sentence::normalized).collect();
        na == nb
    }

    #[test]
    fn q_sentence_one() {
        let out = purify(&p("! u v : f(u)=v -> g(v)=u"));
        let want = [p("! u v : f(u)=v -> g(v)=g(v)"), p("! u v w : f(u)=v & g(v)=w -> w=u")];
        assert!(same(&out, &want), "{out:?}");
    }

    #[test]
    fn pure_input_unchanged() {
        let s = p("! u v w : f(u)=v & f(v)=w -> u=v");
        assert_eq!(purify(&s), vec![s]);
    }

    #[test]
    fn sigma_sentence_three() {
        let out = purify(&p("! u v : def sigma(u,v) & def sigma(v,u) -> u=v"));
        let want = [p("! u v w w2 : sigma(u,v)=w & sigma(v,u)=w2 -> u=v")];
        assert!(same(&out, &want), "{out:?}");
    }

    #[test]
    fn forward_direction_of_sigma_definition() {
        let out = purify(&p("! u v w : f(w)=u & g(w)=v -> sigma(u,v)=w"));
        let want = [
            p("! u v w : f(w)=u & g(w)=v -> sigma(u,v)=sigma(u,v)"),
            p("! u v w x : f(w)=u & g(w)=v & sigma(u,v)=x -> x=w"),
        ];
        assert!(same(&out, &want), "{out:?}");
    }

    #[test]
    fn nested_terms_terminate_pure() {
        for t in [
            "! v : -> f(v)=f(f(v))",
            "! u v : r(f(u),g(h(u,v))) -> r(g(u),u)",
            "! u : f(g(u))=g(f(u)) -> h(f(u),u)=h(f(u),u)",
        ] {
            let out = purify(&p(t));
            assert!(out.iter().all(is_pure), "{t}: {out:?}");
        }
    }

    #[test]
    fn false_premise_vanishes() {
        assert!(purify(&p("! u : false -> f(f(u))=u")).is_empty());
    }
}
