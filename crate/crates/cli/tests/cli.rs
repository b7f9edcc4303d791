use std::path::PathBuf;
use std::process::{Command, Output};

use dualize_core::format::{parse_document, Item};
use dualize_core::{catalog, uhlogic};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn dualize(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dualize")).args(args).env_remove("DUALIZE_JOBS").output().expect("spawn dualize")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

/// Compares against `tests/golden/NAME`; `UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, args: &[&str], want_code: i32) -> String {
    let o = dualize(args);
    assert_eq!(code(&o), want_code, "{args:?}\n{}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &out).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(out, want, "output of {args:?} differs from {name}");
    out
}

#[test]
fn homs_of_r5() {
    let out = golden("homs_r5.txt", &["homs", "--algebra", "three", "--relation", &data("r5.rel")], 0);
    assert!(out.starts_with("6 homomorphisms"));
    assert_eq!(out.matches("# projection").count(), 5);
}

#[test]
fn three_h_is_full_at_bound_three() {
    golden("check_three_h.txt", &["check", "--ego", "three_h", "--full", "--arity-bound", "3"], 0);
}

#[test]
fn three0_is_not_full() {
    let out = golden("check_three0.txt", &["check", "--ego", "three0", "--full"], 1);
    assert!(out.contains("[fail] 3c"));
    assert_eq!(code(&dualize(&["check", "--ego", "three0"])), 0);
}

#[test]
fn purify_q_basis() {
    let out = golden("purify_basis_Q1.txt", &["purify", "--sentences", "basis_Q1"], 0);
    let labels: Vec<&str> = out.lines().map(|l| &l[..l.find(')').unwrap() + 1]).collect();
    assert_eq!(labels, ["(1a)", "(1b)", "(2a)", "(2b)", "(3)"]);
}

#[test]
fn cadef_and_richness_at_dom_h() {
    golden("cadef_dom_h.txt", &["cadef", "--ego", "three0", "--relation", "00,0a,a1,11"], 0);
    golden("op_rich_dom_h.txt", &["op-rich", "--ego", "three0", "--relation", "00,0a,a1,11"], 1);
    assert_eq!(code(&dualize(&["op-rich", "--ego", "three_h", "--relation", "00,0a,a1,11"])), 0);
}

#[test]
fn hom_minimal_verdicts() {
    assert_eq!(code(&dualize(&["hom-minimal", "--algebra", "three", "--relation", "00,01,11"])), 1);
    assert_eq!(code(&dualize(&["hom-minimal", "--algebra", "three", "--relation", "000,01a,111"])), 0);
    assert_eq!(code(&dualize(&["hom-minimal", "--algebra", "Q", "--relation", "00,ab,11"])), 0);
    assert_eq!(code(&dualize(&["hom-minimal", "--algebra", "three", "--relation", "0,a,1"])), 1);
}

#[test]
fn new_from_old_on_three() {
    let out = golden(
        "new_from_old_three.txt",
        &["new-from-old", "--old", "three0", "--target", "three_sigma", "--sentences", "sigma_basis_three", "--minimize"],
        0,
    );
    assert!(out.contains("partial h 2\n0 0 -> 0\n0 a -> a\na 1 -> a\n1 1 -> 1\n"));
}

#[test]
fn transfer_assumptions() {
    golden(
        "transfer_three0.txt",
        &["transfer", "--ego1", "three_sigma", "--ego2", "three0", "--sentences", "sigma_basis_three"],
        1,
    );
    let q = dualize(&["transfer", "--ego1", "Q1", "--ego2", "Q0", "--sentences", "basis_Q1", "--arity-bound", "2"]);
    assert_eq!(code(&q), 0);
    let text = stdout(&q);
    let ax: Vec<&str> = text.lines().filter(|l| l.contains("] ax ")).collect();
    assert_eq!(ax.len(), 2, "{text}");
    assert!(ax[0].contains("ax 1a") && ax[1].contains("ax 2a"));
}

#[test]
fn transfer_structure_round_trip() {
    let o = dualize(&["transfer", "--ego1", "three_sigma", "--ego2", "three_h", "--sentences", "sigma_basis_three", "--structure", "three_h"]);
    assert_eq!(code(&o), 0);
    let dir = scratch_dir("transfer");
    let path = dir.join("x.txt");
    std::fs::write(&path, stdout(&o)).unwrap();
    let back = dualize(&[
        "transfer", "--ego1", "three_sigma", "--ego2", "three_h", "--sentences", "sigma_basis_three",
        "--structure", path.to_str().unwrap(), "--direction", "to-ego2",
    ]);
    assert_eq!(code(&back), 0);
    let items = parse_document(&stdout(&back), &|_| None).unwrap();
    let Item::Structure(x) = &items[0] else { panic!("expected a structure") };
    let h = catalog::ego("three_h").unwrap();
    assert_eq!(x.interps(), h.structure().interps());
}

#[test]
fn m_alpha_matches_three_h() {
    assert_eq!(code(&dualize(&["m-alpha", "--algebra", "three", "--compare", "three_h"])), 0);
    assert_eq!(code(&dualize(&["m-alpha", "--algebra", "three", "--compare", "three0"])), 1);
}

#[test]
fn reduct_verdicts() {
    assert_eq!(code(&dualize(&["reduct", "--ego", "three0", "--of", "three_h"])), 0);
    golden("reduct_Q1_Q0.txt", &["reduct", "--ego", "Q1", "--of", "Q0"], 1);
    assert_eq!(code(&dualize(&["reduct", "--ego", "Q0", "--of", "Q1"])), 0);
}

#[test]
fn exit_codes_for_errors_and_bounds() {
    assert_eq!(code(&dualize(&["frobnicate"])), 2);
    assert_eq!(code(&dualize(&["check", "--ego", "nonexistent"])), 2);
    assert_eq!(code(&dualize(&["homs", "--algebra", "three", "--relation", "0x"])), 2);
    assert_eq!(code(&dualize(&["--jobs", "0", "fixtures"])), 2);
    let o = dualize(&["clone", "--ego", "three_h", "--arity", "3", "--max-members", "5"]);
    assert_eq!(code(&o), 3);
    assert!(o.stdout.is_empty());
}

#[test]
fn json_reports_carry_the_schema() {
    for args in [
        vec!["--json", "check", "--ego", "Q0", "--full", "--arity-bound", "2"],
        vec!["--json", "purify", "--sentences", "basis_Q1"],
        vec!["--json", "homs", "--algebra", "three", "--relation", "00000,0010a,011a1,11111"],
        vec!["--json", "fixtures"],
    ] {
        let o = dualize(&args);
        assert_eq!(code(&o), 0, "{args:?}");
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["schema"], "dualize.report/1");
        assert_eq!(v["verdict"], "pass");
    }
    let v: serde_json::Value = serde_json::from_slice(&dualize(&["--json", "homs", "--algebra", "three", "--relation", "00000,0010a,011a1,11111"]).stdout).unwrap();
    assert_eq!(v["count"], 6);
}

#[test]
fn jobs_do_not_change_output() {
    let args = ["check", "--ego", "three0", "--full"];
    let one = Command::new(env!("CARGO_BIN_EXE_dualize")).args(args).env("DUALIZE_JOBS", "1").output().unwrap();
    let many = dualize(&["--jobs", "4", "check", "--ego", "three0", "--full"]);
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn witnesses_reparse() {
    let o = dualize(&["op-rich", "--ego", "three0", "--relation", "00,0a,a1,11"]);
    let block: String = stdout(&o).lines().skip(1).map(|l| format!("{l}\n")).collect();
    let doc = format!("ego w over three\n{block}");
    let items = parse_document(&doc, &|n| catalog::algebra(n).ok()).unwrap();
    assert!(matches!(&items[0], Item::Ego(e) if e.operations().len() == 1));
    let p = dualize(&["purify", "--sentences", "sigma_basis_three"]);
    for line in stdout(&p).lines() {
        let s = &line[line.find(") ").unwrap() + 2..];
        uhlogic::parse_sentence(s).unwrap();
    }
}

fn scratch_dir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("dualize-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn exported_fixtures_load_from_files() {
    let dir = scratch_dir("fixtures");
    assert_eq!(code(&dualize(&["fixtures", "--export", dir.to_str().unwrap()])), 0);
    for name in catalog::fixture_names() {
        let p = dir.join(format!("{name}.txt"));
        let printed = stdout(&dualize(&["fixtures", name]));
        assert_eq!(std::fs::read_to_string(&p).unwrap(), printed);
    }
    let h = dir.join("three_h.txt");
    assert_eq!(code(&dualize(&["check", "--ego", h.to_str().unwrap(), "--full"])), 0);
    let b = dir.join("basis_Q1.txt");
    assert_eq!(code(&dualize(&["purify", "--sentences", b.to_str().unwrap()])), 0);
}
