//! Property tests: library searches against brute-force oracles.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::*;
use dualize_core::algebra::{all_tuples, AlterEgo, Elem, FiniteStructure, Interp, PartialOperation, Relation};
use dualize_core::catalog;
use dualize_core::definability::cadef_define;

fn cadef_egos() -> Vec<AlterEgo> {
    ["three0", "three_sigma", "three_h", "Q0", "Q1"].iter().map(|n| catalog::ego(n).unwrap()).collect()
}

#[test]
fn cadef_matches_intersections_on_subuniverses() {
    for e in cadef_egos() {
        let n = e.algebra().size();
        for k in 1..=2 {
            let atoms = atomic_relations(&e, k);
            for s in e.algebra().subuniverses(k).unwrap() {
                let got = cadef_define(&e, &s).unwrap();
                let want = oracle_definable(&atoms, &point_set(&s, n), n, k);
                assert_eq!(got.is_some(), want, "{} {s:?}", e.name());
                if let Some(f) = got {
                    assert_eq!(f.solutions(e.structure()).unwrap(), s);
                }
            }
        }
    }
}

fn subset_relation(n: usize, k: usize, mask: u64) -> Relation {
    let ts = all_tuples(n, k).enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, t)| t);
    Relation::new(n, k, ts).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // arbitrary subsets, mostly not subuniverses
    #[test]
    fn cadef_matches_intersections_on_subsets(which in 0usize..5, mask in 1u64..(1 << 16)) {
        let e = &cadef_egos()[which];
        let n = e.algebra().size();
        let mask = mask & ((1u64 << (n * n)) - 1);
        prop_assume!(mask != 0);
        let s = subset_relation(n, 2, mask);
        let atoms = atomic_relations(e, 2);
        let got = cadef_define(e, &s);
        let want = oracle_definable(&atoms, &point_set(&s, n), n, 2);
        match got {
            Ok(f) => prop_assert_eq!(f.is_some(), want),
            Err(_) => prop_assert!(!e.algebra().is_subuniverse(&s).unwrap()),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn hom_set_matches_all_maps(
        q in any::<bool>(),
        arity in 1usize..=4,
        gens in proptest::collection::vec(proptest::collection::vec(0usize..4, 4), 0..3),
    ) {
        let m = catalog::algebra(if q { "Q" } else { "three" }).unwrap();
        let n = m.size();
        let gens: Vec<Vec<Elem>> = gens.into_iter().map(|g| g[..arity].iter().map(|&x| x % n).collect()).collect();
        let r = m.subuniverse_closure(arity, &gens).unwrap();
        prop_assume!(r.len() <= 8);
        let got: BTreeSet<Vec<Elem>> = m.hom_set(&r).unwrap().iter().map(|h| h.values().to_vec()).collect();
        prop_assert_eq!(got, oracle_homs(&m, &r));
    }
}

#[test]
fn purify_preserves_truth_on_fixture_structures() {
    let mut structures: Vec<FiniteStructure> = Vec::new();
    for n in ["three0", "three_sigma", "three_h", "Q0", "Q1"] {
        let e = catalog::ego(n).unwrap();
        structures.push(e.structure().clone());
        structures.push(e.structure().power(2).unwrap());
        structures.extend(e.structure().substructures().unwrap().into_iter().map(|(_, x)| x));
    }
    let mut checked = 0;
    for x in &structures {
        for s in fixture_sentences().iter().filter(|s| speaks(x, s)) {
            assert!(purify_agrees(x, s), "{} {s}", x.name());
            checked += 1;
        }
    }
    assert!(checked > 100);
}

fn partial_op(n: usize, arity: usize, table: &[Option<usize>]) -> PartialOperation {
    let pairs = all_tuples(n, arity).zip(table).filter_map(|(t, v)| v.map(|v| (t, v % n))).collect();
    PartialOperation::from_pairs(n, arity, pairs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    // random partial structures in the f, g, sigma signature
    #[test]
    fn purify_preserves_truth_on_random_structures(
        n in 1usize..=3,
        f in proptest::collection::vec(proptest::option::of(0usize..3), 3),
        g in proptest::collection::vec(proptest::option::of(0usize..3), 3),
        sigma in proptest::collection::vec(proptest::option::of(0usize..3), 9),
    ) {
        let elements: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
        let x = FiniteStructure::from_symbols(
            "X",
            elements,
            vec![
                ("f".into(), Interp::Operation(partial_op(n, 1, &f[..n]))),
                ("g".into(), Interp::Operation(partial_op(n, 1, &g[..n]))),
                ("sigma".into(), Interp::Operation(partial_op(n, 2, &sigma[..n * n]))),
            ],
        )
        .unwrap();
        for s in fixture_sentences() {
            prop_assert!(purify_agrees(&x, &s), "{}", s);
        }
    }
}
