use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dualize_core::algebra::{AlterEgo, FiniteAlgebra, FiniteStructure, Relation};
use dualize_core::clone::{structural_reduct_witness, CloneLimits, PartialClone, ReductWitness};
use dualize_core::definability::{hom_minimal_relations, is_hom_minimal, Definer};
use dualize_core::duality::{
    build_m_alpha, check_evaluation_isos, check_finite_duality, check_finite_full_duality,
    check_structural_equivalence, check_transfer_assumptions, purify_labelled, run_new_from_old, transfer_structure,
    Direction, DualityReport, NewFromOldOptions, TransferContext, Verdict, SCHEMA,
};
use dualize_core::format::{
    parse_document, parse_relation, write_ego, write_operation, write_relation, write_structure, Item,
};
use dualize_core::uhlogic::{parse_sentences, Labelled};
use dualize_core::{catalog, par, Error};

#[derive(Parser)]
#[command(name = "dualize", version, about = "Finite-level natural duality checks")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (default: DUALIZE_JOBS, else all cores).
    #[arg(long, global = true, env = "DUALIZE_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Homomorphisms from a compatible relation to the algebra.
    Homs {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        relation: String,
    },
    /// Test one relation, or list all hom-minimal relations up to a bound.
    HomMinimal {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        relation: Option<String>,
        #[arg(long, default_value_t = 2)]
        arity_bound: usize,
    },
    /// A conjunct-atomic definition of a relation in an alter ego.
    Cadef {
        #[arg(long)]
        ego: String,
        #[arg(long)]
        relation: String,
    },
    /// Members of the enriched partial clone of one arity.
    Clone {
        #[arg(long)]
        ego: String,
        #[arg(long, default_value_t = 1)]
        arity: usize,
        #[command(flatten)]
        limits: Limits,
    },
    /// Operational richness at a relation.
    OpRich {
        #[arg(long)]
        ego: String,
        #[arg(long)]
        relation: String,
        #[command(flatten)]
        limits: Limits,
    },
    /// Whether one alter ego is a structural reduct of another.
    Reduct {
        #[arg(long)]
        ego: String,
        #[arg(long)]
        of: String,
        /// Check both directions.
        #[arg(long)]
        equivalent: bool,
    },
    /// Purify a sentence basis.
    Purify {
        #[arg(long)]
        sentences: String,
    },
    /// Duality at the finite level, up to an arity bound.
    Check {
        #[arg(long)]
        ego: String,
        #[arg(long)]
        full: bool,
        /// Also verify the evaluation maps on powers up to this size.
        #[arg(long)]
        direct_size: Option<usize>,
        #[arg(long, default_value_t = 3)]
        arity_bound: usize,
    },
    /// The bounded alter ego of all compatible relations definable from
    /// hom-minimal ones, with their partial operations.
    MAlpha {
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value_t = 3)]
        arity_bound: usize,
        /// Compare with this alter ego instead of printing.
        #[arg(long)]
        compare: Option<String>,
    },
    /// Enrich an alter ego so that it fully dualises, guided by the basis of
    /// a second alter ego.
    NewFromOld {
        #[arg(long)]
        old: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        sentences: String,
        #[arg(long)]
        minimize: bool,
        #[arg(long, default_value_t = 3)]
        arity_bound: usize,
        #[arg(long, default_value_t = 3)]
        basis_bound: usize,
    },
    /// Check the transfer assumptions, or move a structure across.
    Transfer {
        /// The alter ego whose basis is given.
        #[arg(long)]
        ego1: String,
        #[arg(long)]
        ego2: String,
        #[arg(long)]
        sentences: String,
        #[arg(long)]
        structure: Option<String>,
        #[arg(long, value_enum, default_value_t = Dir::ToEgo1)]
        direction: Dir,
        #[arg(long, default_value_t = 3)]
        arity_bound: usize,
        #[arg(long, default_value_t = 3)]
        basis_bound: usize,
    },
    /// List the built-in fixtures, print one, or export them all.
    Fixtures {
        name: Option<String>,
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Limits {
    #[arg(long, default_value_t = CloneLimits::default().max_arity)]
    max_arity: usize,
    #[arg(long, default_value_t = CloneLimits::default().max_members)]
    max_members: usize,
}

impl Limits {
    fn get(&self) -> CloneLimits {
        CloneLimits { max_arity: self.max_arity, max_members: self.max_members }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Dir {
    /// From a model of the second basis to the first alter ego's language.
    ToEgo1,
    ToEgo2,
}

/// What a verb found: text for the terminal, JSON for `--json`, and the
/// exit status.
struct Outcome {
    text: String,
    json: Value,
    verdict: Verdict,
}

impl Outcome {
    fn new(verb: &str, verdict: Verdict, text: String, mut json: Value) -> Outcome {
        if let Value::Object(m) = &mut json {
            m.insert("schema".into(), SCHEMA.into());
            m.insert("check".into(), verb.into());
            m.insert("verdict".into(), serde_json::to_value(verdict).expect("verdict"));
        }
        Outcome { text, json, verdict }
    }

    fn report(r: DualityReport) -> Outcome {
        let json = serde_json::from_str(&r.to_json()).expect("report json");
        Outcome { text: r.to_string(), json, verdict: r.verdict }
    }
}

fn exit_code(v: Verdict) -> u8 {
    match v {
        Verdict::Pass => 0,
        Verdict::Fail => 1,
        Verdict::Inconclusive => 3,
    }
}

fn read(path: &str) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read `{path}`: {e}")))
}

fn is_file(s: &str) -> bool {
    Path::new(s).is_file()
}

fn document(path: &str) -> Result<Vec<Item>, Error> {
    parse_document(&read(path)?, &|n| catalog::algebra(n).ok())
}

fn load_algebra(s: &str) -> Result<FiniteAlgebra, Error> {
    if !is_file(s) {
        return catalog::algebra(s);
    }
    document(s)?
        .into_iter()
        .find_map(|i| match i {
            Item::Algebra(a) => Some(a),
            _ => None,
        })
        .ok_or_else(|| Error::Input(format!("`{s}` contains no algebra")))
}

fn load_ego(s: &str) -> Result<AlterEgo, Error> {
    if !is_file(s) {
        return catalog::ego(s);
    }
    document(s)?
        .into_iter()
        .find_map(|i| match i {
            Item::Ego(e) => Some(e),
            _ => None,
        })
        .ok_or_else(|| Error::Input(format!("`{s}` contains no alter ego")))
}

fn load_structure(s: &str) -> Result<FiniteStructure, Error> {
    if !is_file(s) {
        return Ok(catalog::ego(s)?.structure().clone());
    }
    document(s)?
        .into_iter()
        .find_map(|i| match i {
            Item::Structure(x) => Some(x),
            Item::Ego(e) => Some(e.structure().clone()),
            _ => None,
        })
        .ok_or_else(|| Error::Input(format!("`{s}` contains no structure")))
}

fn load_sentences(s: &str) -> Result<Vec<Labelled>, Error> {
    if is_file(s) {
        parse_sentences(&read(s)?)
    } else {
        catalog::sentences(s)
    }
}

/// A relation file, or inline compact tuples such as `00,0a,11`.
fn load_relation(s: &str, elements: &[String]) -> Result<(String, Relation), Error> {
    if is_file(s) {
        return parse_relation(&read(s)?, elements);
    }
    let tuples: Vec<&str> = s.split([',', ' ']).filter(|t| !t.is_empty()).collect();
    let arity = tuples.first().map_or(0, |t| t.chars().count());
    let text = format!("relation r {arity}\n{}\n", tuples.join("\n"));
    parse_relation(&text, elements)
}

fn names(a: &FiniteAlgebra) -> Vec<String> {
    a.elements().to_vec()
}

fn rel_text(r: &Relation, els: &[String]) -> Vec<String> {
    r.tuples().iter().map(|t| t.iter().map(|&x| els[x].as_str()).collect::<Vec<_>>().join("")).collect()
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    match cli.cmd {
        Cmd::Homs { algebra, relation } => {
            let m = load_algebra(&algebra)?;
            let els = names(&m);
            let (name, r) = load_relation(&relation, &els)?;
            let homs = m.hom_set(&r)?;
            let mut text = format!("{} homomorphisms {name} -> {}\n", homs.len(), m.name());
            let mut ops = Vec::new();
            for (i, h) in homs.iter().enumerate() {
                let proj = h.projection_indices();
                let block = write_operation(&format!("h{}", i + 1), h, &els);
                if let Some(&p) = proj.first() {
                    text.push_str(&format!("# projection x{}\n", p + 1));
                }
                text.push_str(&block);
                ops.push(json!({ "text": block, "projection": proj.first().map(|p| p + 1) }));
            }
            Ok(Outcome::new("homs", Verdict::Pass, text, json!({ "count": homs.len(), "homomorphisms": ops })))
        }
        Cmd::HomMinimal { algebra, relation: Some(relation), .. } => {
            let m = load_algebra(&algebra)?;
            let els = names(&m);
            let (name, r) = load_relation(&relation, &els)?;
            let hm = is_hom_minimal(&m, &r)?;
            let mut text = format!("{name} is {}hom-minimal\n", if hm { "" } else { "not " });
            let mut witness = Value::Null;
            if !hm {
                if let Some(h) = m.non_projection_hom(&r)? {
                    let block = write_operation("k", &h, &els);
                    text.push_str(&block);
                    witness = block.into();
                }
            }
            let v = if hm { Verdict::Pass } else { Verdict::Fail };
            Ok(Outcome::new("hom-minimal", v, text, json!({ "relation": name, "witness": witness })))
        }
        Cmd::HomMinimal { algebra, relation: None, arity_bound } => {
            let m = load_algebra(&algebra)?;
            let els = names(&m);
            let rs = hom_minimal_relations(&m, arity_bound)?;
            let mut text = format!("{} hom-minimal relations of arity <= {arity_bound}\n", rs.len());
            for (i, r) in rs.iter().enumerate() {
                text.push_str(&write_relation(&format!("m{}", i + 1), r, &els));
            }
            let list: Vec<Vec<String>> = rs.iter().map(|r| rel_text(r, &els)).collect();
            Ok(Outcome::new("hom-minimal", Verdict::Pass, text, json!({ "arity_bound": arity_bound, "relations": list })))
        }
        Cmd::Cadef { ego, relation } => {
            let e = load_ego(&ego)?;
            let els = names(e.algebra());
            let (name, r) = load_relation(&relation, &els)?;
            match Definer::new(&e, CloneLimits::default()).define(&r)? {
                Some(f) => Ok(Outcome::new(
                    "cadef",
                    Verdict::Pass,
                    format!("{name} := {f}\n"),
                    json!({ "relation": name, "formula": f.to_string() }),
                )),
                None => Ok(Outcome::new(
                    "cadef",
                    Verdict::Fail,
                    format!("{name} is not conjunct-atomic definable in {}\n", e.name()),
                    json!({ "relation": name, "formula": Value::Null }),
                )),
            }
        }
        Cmd::Clone { ego, arity, limits } => {
            let e = load_ego(&ego)?;
            let clone = PartialClone::new(&e, limits.get());
            let fragment = clone.members(arity)?;
            let mut text = format!("{} members of arity {arity}\n", fragment.members.len());
            let terms: Vec<String> = fragment.members.iter().map(|m| m.term.to_string()).collect();
            for t in &terms {
                text.push_str(t);
                text.push('\n');
            }
            Ok(Outcome::new("clone", Verdict::Pass, text, json!({ "arity": arity, "members": terms })))
        }
        Cmd::OpRich { ego, relation, limits } => {
            let e = load_ego(&ego)?;
            let els = names(e.algebra());
            let (name, r) = load_relation(&relation, &els)?;
            let clone = PartialClone::new(&e, limits.get());
            match clone.richness_witness(&r)? {
                None => Ok(Outcome::new(
                    "op-rich",
                    Verdict::Pass,
                    format!("{} is operationally rich at {name}\n", e.name()),
                    json!({ "relation": name, "witness": Value::Null }),
                )),
                Some(h) => {
                    let block = write_operation("k", &h, &els);
                    Ok(Outcome::new(
                        "op-rich",
                        Verdict::Fail,
                        format!("{} is not operationally rich at {name}\n{block}", e.name()),
                        json!({ "relation": name, "witness": block }),
                    ))
                }
            }
        }
        Cmd::Reduct { ego, of, equivalent } => {
            let e1 = load_ego(&ego)?;
            let e2 = load_ego(&of)?;
            if equivalent {
                return Ok(Outcome::report(check_structural_equivalence(&e1, &e2)?));
            }
            let els = names(e1.algebra());
            let w = structural_reduct_witness(&e1, &e2)?;
            let (verdict, text, witness) = match w {
                None => (Verdict::Pass, format!("{} is a structural reduct of {}\n", e1.name(), e2.name()), Value::Null),
                Some(w) => {
                    let block = match &w {
                        ReductWitness::Operation(n, h) => write_operation(n, h, &els),
                        ReductWitness::Relation(n, r) => write_relation(n, r, &els),
                    };
                    let text = format!("{} is not a structural reduct of {}\n{block}", e1.name(), e2.name());
                    (Verdict::Fail, text, block.into())
                }
            };
            Ok(Outcome::new("reduct", verdict, text, json!({ "ego": e1.name(), "of": e2.name(), "witness": witness })))
        }
        Cmd::Purify { sentences } => {
            let ss = load_sentences(&sentences)?;
            let pure = purify_labelled(&ss);
            let mut text = String::new();
            let mut list = Vec::new();
            for (label, s) in &pure {
                text.push_str(&format!("({label}) {s}\n"));
                list.push(json!({ "label": label, "sentence": s.to_string() }));
            }
            Ok(Outcome::new("purify", Verdict::Pass, text, json!({ "sentences": list })))
        }
        Cmd::Check { ego, full, direct_size, arity_bound } => {
            let e = load_ego(&ego)?;
            let mut report =
                if full { check_finite_full_duality(&e, arity_bound)? } else { check_finite_duality(&e, arity_bound)? };
            if let Some(k) = direct_size {
                report.absorb("direct ", check_evaluation_isos(&e, k)?);
            }
            Ok(Outcome::report(report))
        }
        Cmd::MAlpha { algebra, arity_bound, compare } => {
            let m = load_algebra(&algebra)?;
            let ma = build_m_alpha(&m, arity_bound)?;
            if let Some(other) = compare {
                let e2 = load_ego(&other)?;
                return Ok(Outcome::report(check_structural_equivalence(&ma.ego, &e2)?));
            }
            let text = format!(
                "# {} relations, {} partial operations, from {} hom-minimal relations\n{}",
                ma.relations.len(),
                ma.ego.operations().len(),
                ma.hom_minimal.len(),
                write_ego(&ma.ego)
            );
            let json = json!({
                "arity_bound": arity_bound,
                "relations": ma.relations.len(),
                "operations": ma.ego.operations().len(),
                "ego": write_ego(&ma.ego),
            });
            Ok(Outcome::new("m-alpha", Verdict::Pass, text, json))
        }
        Cmd::NewFromOld { old, target, sentences, minimize, arity_bound, basis_bound } => {
            let e0 = load_ego(&old)?;
            let e1 = load_ego(&target)?;
            let ss = load_sentences(&sentences)?;
            let opts = NewFromOldOptions { arity_bound, basis_bound, minimize };
            let out = run_new_from_old(e0.algebra(), &e0, &e1, &ss, &opts)?;
            let els = names(e0.algebra());
            let mut text = String::new();
            let mut added = Vec::new();
            for a in &out.added {
                text.push_str(&format!("({}) {}\n", a.label, a.sentence));
                text.push_str(&format!("# relation {}\n", rel_text(&a.relation, &els).join(" ")));
                let ops: Vec<String> = a.operations.iter().map(|(n, h)| write_operation(n, h, &els)).collect();
                if ops.is_empty() {
                    text.push_str("# only projections\n");
                }
                for o in &ops {
                    text.push_str(o);
                }
                added.push(json!({
                    "label": a.label,
                    "sentence": a.sentence.to_string(),
                    "relation": rel_text(&a.relation, &els),
                    "kept": a.kept.as_ref().map(|k| k.iter().map(|i| i + 1).collect::<Vec<_>>()),
                    "operations": ops,
                }));
            }
            text.push_str(&write_ego(&out.ego));
            text.push_str(&out.report.to_string());
            let json = json!({
                "added": added,
                "ego": write_ego(&out.ego),
                "report": serde_json::from_str::<Value>(&out.report.to_json()).expect("report json"),
            });
            Ok(Outcome::new("new-from-old", out.report.verdict, text, json))
        }
        Cmd::Transfer { ego1, ego2, sentences, structure, direction, arity_bound, basis_bound } => {
            let e1 = load_ego(&ego1)?;
            let e2 = load_ego(&ego2)?;
            let ss = load_sentences(&sentences)?;
            let ctx = TransferContext::new(&e1, &e2, &ss, basis_bound)?;
            let Some(structure) = structure else {
                return Ok(Outcome::report(check_transfer_assumptions(&ctx, arity_bound)?));
            };
            let x = load_structure(&structure)?;
            let dir = match direction {
                Dir::ToEgo1 => Direction::TwoToOne,
                Dir::ToEgo2 => Direction::OneToTwo,
            };
            let y = transfer_structure(&x, &ctx, dir)?;
            let text = write_structure(&y);
            Ok(Outcome::new("transfer", Verdict::Pass, text.clone(), json!({ "structure": text })))
        }
        Cmd::Fixtures { name, export } => {
            if let Some(dir) = export {
                std::fs::create_dir_all(&dir).map_err(|e| Error::Input(format!("{}: {e}", dir.display())))?;
                let mut files = Vec::new();
                for n in catalog::fixture_names() {
                    let path = dir.join(format!("{n}.txt"));
                    std::fs::write(&path, catalog::fixture_text(n)?)
                        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
                    files.push(path.display().to_string());
                }
                let text = files.iter().map(|f| format!("{f}\n")).collect();
                return Ok(Outcome::new("fixtures", Verdict::Pass, text, json!({ "files": files })));
            }
            if let Some(n) = name {
                let body = catalog::fixture_text(&n)?;
                return Ok(Outcome::new("fixtures", Verdict::Pass, body.to_string(), json!({ "name": n, "text": body })));
            }
            let mut text = String::new();
            let mut list = Vec::new();
            for n in catalog::fixture_names() {
                let f = catalog::load_fixture(n)?;
                text.push_str(&format!("{n:<18} {}\n", f.description));
                list.push(json!({ "name": n, "description": f.description }));
            }
            Ok(Outcome::new("fixtures", Verdict::Pass, text, json!({ "fixtures": list })))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let json = cli.json;
    let result = match cli.jobs {
        Some(0) => Err(Error::Input("--jobs must be at least 1".into())),
        Some(j) => par::with_jobs(j, || run(cli)),
        None => run(cli),
    };
    match result {
        Ok(out) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json"));
            } else {
                print!("{}", out.text);
                if !out.text.ends_with('\n') {
                    println!();
                }
            }
            ExitCode::from(exit_code(out.verdict))
        }
        Err(e) => {
            eprintln!("dualize: {e}");
            ExitCode::from(match e {
                Error::BoundExceeded(_) => 3,
                _ => 2,
            })
        }
    }
}
