//! Line-oriented text format for algebras, alter egos, structures and
//! relations.
//!
//! ```text
//! algebra three
//! elements 0 a 1
//! op meet 2
//! 0 0 -> 0
//! ...
//! op zero 0
//! -> 0
//!
//! ego three_h over three
//! partial f 1
//! 0 -> 0
//! ...
//! relation graph_f 2
//! 00
//! a0
//!
//! structure X
//! elements x y
//! signature partial f 1, relation r 2
//! partial f 1
//! x -> y
//! relation r 2
//! x y
//! ```
//!
//! Tuples may be written compactly (`0010a`) when every element name is a
//! single character. `#` starts a comment.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::algebra::{
    all_tuples, AlterEgo, Elem, FiniteAlgebra, FiniteStructure, Interp, Operation, PartialOperation, Relation,
    Signature, Symbol, SymbolKind,
};
use crate::error::{Error, Result};

/// One top-level block of a document.
#[derive(Clone, Debug)]
pub enum Item {
    Algebra(FiniteAlgebra),
    Ego(AlterEgo),
    Structure(FiniteStructure),
    Relation(String, Relation),
}

struct Line<'a> {
    no: usize,
    words: Vec<&'a str>,
}

fn lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, l)| {
            let l = l.split('#').next().unwrap_or("");
            let words: Vec<&str> = l.split_whitespace().collect();
            (!words.is_empty()).then_some(Line { no: i + 1, words })
        })
        .collect()
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, column: 1, message: msg.into() })
}

fn is_header(w: &str) -> bool {
    matches!(w, "algebra" | "ego" | "structure" | "elements" | "op" | "partial" | "relation" | "signature")
}

struct Elements<'a> {
    names: &'a [String],
    index: HashMap<&'a str, Elem>,
    single_char: bool,
}

impl<'a> Elements<'a> {
    fn new(names: &'a [String]) -> Self {
        Elements {
            names,
            index: names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect(),
            single_char: names.iter().all(|n| n.chars().count() == 1),
        }
    }

    fn elem(&self, line: usize, w: &str) -> Result<Elem> {
        self.index.get(w).copied().map_or_else(|| err(line, format!("unknown element `{w}`")), Ok)
    }

    fn tuple(&self, line: usize, words: &[&str], arity: usize) -> Result<Vec<Elem>> {
        if words.len() == 1 && arity > 1 && self.single_char && words[0].chars().count() == arity {
            return words[0].chars().map(|c| self.elem(line, &c.to_string())).collect();
        }
        if words.len() != arity {
            return err(line, format!("expected {arity} elements, found {}", words.len()));
        }
        words.iter().map(|w| self.elem(line, w)).collect()
    }

    fn size(&self) -> usize {
        self.names.len()
    }
}

fn parse_usize(line: usize, w: Option<&&str>, what: &str) -> Result<usize> {
    w.and_then(|w| w.parse().ok()).map_or_else(|| err(line, format!("expected {what}")), Ok)
}

/// Body lines of a block: everything up to the next header word.
fn body<'a, 'b>(ls: &'b [Line<'a>], pos: &mut usize) -> &'b [Line<'a>] {
    let start = *pos;
    while *pos < ls.len() && !is_header(ls[*pos].words[0]) {
        *pos += 1;
    }
    &ls[start..*pos]
}

fn split_arrow<'a>(l: &Line<'a>) -> Result<(Vec<&'a str>, &'a str)> {
    let k = l.words.iter().position(|&w| w == "->");
    match k {
        Some(k) if k + 2 == l.words.len() => Ok((l.words[..k].to_vec(), l.words[k + 1])),
        _ => err(l.no, "expected `args -> value`"),
    }
}

fn table_pairs(els: &Elements, rows: &[Line], arity: usize) -> Result<Vec<(Vec<Elem>, Elem)>> {
    rows.iter()
        .map(|l| {
            let (args, v) = split_arrow(l)?;
            Ok((els.tuple(l.no, &args, arity)?, els.elem(l.no, v)?))
        })
        .collect()
}

fn symbol_block(els: &Elements, ls: &[Line], pos: &mut usize) -> Result<(String, Interp)> {
    let head = &ls[*pos];
    let kind = head.words[0];
    let name = head.words.get(1).map_or_else(|| err(head.no, "expected a symbol name"), |s| Ok(s.to_string()))?;
    let arity = parse_usize(head.no, head.words.get(2), "an arity")?;
    *pos += 1;
    let rows = body(ls, pos);
    let at = |e: Error| match e {
        Error::Input(m) => Error::Parse { line: head.no, column: 1, message: m },
        e => e,
    };
    match kind {
        "partial" => {
            let pairs = table_pairs(els, rows, arity)?;
            let h = PartialOperation::from_pairs(els.size(), arity, pairs).map_err(at)?;
            Ok((name, Interp::Operation(h)))
        }
        _ => {
            let ts = rows.iter().map(|l| els.tuple(l.no, &l.words, arity)).collect::<Result<Vec<_>>>()?;
            Ok((name, Interp::Relation(Relation::new(els.size(), arity, ts).map_err(at)?)))
        }
    }
}

fn element_line(ls: &[Line], pos: &mut usize) -> Result<Vec<String>> {
    match ls.get(*pos) {
        Some(l) if l.words[0] == "elements" => {
            *pos += 1;
            Ok(l.words[1..].iter().map(|s| s.to_string()).collect())
        }
        Some(l) => err(l.no, "expected `elements`"),
        None => err(ls.last().map_or(1, |l| l.no), "expected `elements`"),
    }
}

fn parse_algebra(ls: &[Line], pos: &mut usize) -> Result<FiniteAlgebra> {
    let head = &ls[*pos];
    let name = head.words.get(1).map_or_else(|| err(head.no, "expected an algebra name"), |s| Ok(s.to_string()))?;
    *pos += 1;
    let elements = element_line(ls, pos)?;
    let els = Elements::new(&elements);
    let mut ops = Vec::new();
    while let Some(l) = ls.get(*pos) {
        if l.words[0] != "op" {
            break;
        }
        let op = l.words.get(1).map_or_else(|| err(l.no, "expected an operation name"), |s| Ok(s.to_string()))?;
        let arity = parse_usize(l.no, l.words.get(2), "an arity")?;
        *pos += 1;
        let pairs = table_pairs(&els, body(ls, pos), arity)?;
        let mut table = vec![None; all_tuples(els.size(), arity).count()];
        for (t, v) in pairs {
            let c = crate::algebra::encode(els.size(), &t);
            if table[c].replace(v).is_some_and(|old| old != v) {
                return err(l.no, format!("`{op}` assigns two values to one tuple"));
            }
        }
        let table: Option<Vec<Elem>> = table.into_iter().collect();
        let Some(table) = table else {
            return err(l.no, format!("table of `{op}` is not total"));
        };
        ops.push(Operation { name: op, arity, table });
    }
    FiniteAlgebra::new(name, elements, ops).map_err(|e| match e {
        Error::Input(m) => Error::Parse { line: head.no, column: 1, message: m },
        e => e,
    })
}

fn parse_ego(
    ls: &[Line],
    pos: &mut usize,
    algebras: &dyn Fn(&str) -> Option<FiniteAlgebra>,
) -> Result<AlterEgo> {
    let head = &ls[*pos];
    let (name, alg) = match head.words.as_slice() {
        [_, n, "over", a] => (n.to_string(), *a),
        _ => return err(head.no, "expected `ego NAME over ALGEBRA`"),
    };
    let algebra = algebras(alg).map_or_else(|| err(head.no, format!("unknown algebra `{alg}`")), Ok)?;
    *pos += 1;
    let els = Elements::new(algebra.elements());
    let mut symbols = Vec::new();
    while let Some(l) = ls.get(*pos) {
        if !matches!(l.words[0], "partial" | "relation") {
            break;
        }
        symbols.push(symbol_block(&els, ls, pos)?);
    }
    AlterEgo::new(name, algebra.clone(), symbols).map_err(|e| match e {
        Error::Input(m) => Error::Parse { line: head.no, column: 1, message: m },
        e => e,
    })
}

fn parse_signature(l: &Line) -> Result<Signature> {
    let text = l.words[1..].join(" ");
    let mut symbols = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let ws: Vec<&str> = part.split_whitespace().collect();
        let [kind, name, arity] = ws.as_slice() else {
            return err(l.no, format!("bad signature entry `{part}`"));
        };
        let arity = parse_usize(l.no, Some(arity), "an arity")?;
        let kind = match *kind {
            "partial" => SymbolKind::Operation,
            "relation" => SymbolKind::Relation,
            k => return err(l.no, format!("unknown symbol kind `{k}`")),
        };
        symbols.push(Symbol { name: name.to_string(), kind, arity });
    }
    Signature::new(symbols)
}

fn parse_structure(ls: &[Line], pos: &mut usize) -> Result<FiniteStructure> {
    let head = &ls[*pos];
    let name = head.words.get(1).map_or_else(|| err(head.no, "expected a structure name"), |s| Ok(s.to_string()))?;
    *pos += 1;
    let elements = element_line(ls, pos)?;
    let sig = match ls.get(*pos) {
        Some(l) if l.words[0] == "signature" => {
            *pos += 1;
            parse_signature(l)?
        }
        _ => return err(head.no, "expected a `signature` line"),
    };
    let els = Elements::new(&elements);
    let mut found: HashMap<String, Interp> = HashMap::new();
    while let Some(l) = ls.get(*pos) {
        if !matches!(l.words[0], "partial" | "relation") {
            break;
        }
        let (n, i) = symbol_block(&els, ls, pos)?;
        if sig.get(&n).is_none() {
            return err(l.no, format!("`{n}` is not in the signature"));
        }
        found.insert(n, i);
    }
    let mut interps = Vec::new();
    for s in sig.symbols() {
        // an omitted symbol is empty
        interps.push(found.remove(&s.name).unwrap_or_else(|| match s.kind {
            SymbolKind::Relation => Interp::Relation(Relation::empty(elements.len(), s.arity)),
            SymbolKind::Operation => Interp::Operation(
                PartialOperation::new(Relation::empty(elements.len(), s.arity), vec![]).expect("empty operation"),
            ),
        }));
    }
    FiniteStructure::new(name, elements, sig, interps)
}

/// Parses a document of blocks. Egos name their algebra, which is looked up
/// among earlier blocks first and then through `resolve`.
pub fn parse_document(text: &str, resolve: &dyn Fn(&str) -> Option<FiniteAlgebra>) -> Result<Vec<Item>> {
    let ls = lines(text);
    let mut pos = 0;
    let mut items = Vec::new();
    while pos < ls.len() {
        let l = &ls[pos];
        match l.words[0] {
            "algebra" => items.push(Item::Algebra(parse_algebra(&ls, &mut pos)?)),
            "ego" => {
                let local = |n: &str| {
                    items
                        .iter()
                        .find_map(|i| match i {
                            Item::Algebra(a) if a.name() == n => Some(a.clone()),
                            _ => None,
                        })
                        .or_else(|| resolve(n))
                };
                let e = parse_ego(&ls, &mut pos, &local)?;
                items.push(Item::Ego(e));
            }
            "structure" => items.push(Item::Structure(parse_structure(&ls, &mut pos)?)),
            w => return err(l.no, format!("unexpected `{w}`")),
        }
    }
    Ok(items)
}

/// Parses a relation file `relation NAME ARITY` followed by tuples, over the
/// given carrier.
pub fn parse_relation(text: &str, elements: &[String]) -> Result<(String, Relation)> {
    let ls = lines(text);
    let Some(head) = ls.first() else {
        return err(1, "empty relation file");
    };
    if head.words[0] != "relation" {
        return err(head.no, "expected `relation NAME ARITY`");
    }
    let els = Elements::new(elements);
    let mut pos = 0;
    let (name, i) = symbol_block(&els, &ls, &mut pos)?;
    if pos < ls.len() {
        return err(ls[pos].no, "unexpected input after the relation");
    }
    match i {
        Interp::Relation(r) => Ok((name, r)),
        Interp::Operation(_) => unreachable!(),
    }
}

fn write_tuple(out: &mut String, names: &[String], t: &[Elem]) {
    let compact = t.len() > 1 && names.iter().all(|n| n.chars().count() == 1);
    let parts: Vec<&str> = t.iter().map(|&x| names[x].as_str()).collect();
    out.push_str(&parts.join(if compact { "" } else { " " }));
}

fn write_interp(out: &mut String, names: &[String], name: &str, i: &Interp) {
    match i {
        Interp::Relation(r) => {
            let _ = writeln!(out, "relation {name} {}", r.arity());
            for t in r.tuples() {
                write_tuple(out, names, t);
                out.push('\n');
            }
        }
        Interp::Operation(h) => {
            let _ = writeln!(out, "partial {name} {}", h.arity());
            for (t, &v) in h.domain().tuples().iter().zip(h.values()) {
                let args: Vec<&str> = t.iter().map(|&x| names[x].as_str()).collect();
                let _ = writeln!(out, "{}-> {}", args.iter().map(|a| format!("{a} ")).collect::<String>(), names[v]);
            }
        }
    }
}

pub fn write_algebra(a: &FiniteAlgebra) -> String {
    let mut out = format!("algebra {}\nelements {}\n", a.name(), a.elements().join(" "));
    for op in a.ops() {
        let _ = writeln!(out, "op {} {}", op.name, op.arity);
        for (t, &v) in all_tuples(a.size(), op.arity).zip(&op.table) {
            let args: String = t.iter().map(|&x| format!("{} ", a.elements()[x])).collect();
            let _ = writeln!(out, "{args}-> {}", a.elements()[v]);
        }
    }
    out
}

/// The ego block alone; its algebra must be supplied separately.
pub fn write_ego(e: &AlterEgo) -> String {
    let mut out = format!("ego {} over {}\n", e.name(), e.algebra().name());
    for (s, i) in e.symbols() {
        write_interp(&mut out, e.algebra().elements(), &s.name, i);
    }
    out
}

pub fn write_structure(x: &FiniteStructure) -> String {
    let sig: Vec<String> = x
        .signature()
        .symbols()
        .iter()
        .map(|s| {
            let kind = match s.kind {
                SymbolKind::Relation => "relation",
                SymbolKind::Operation => "partial",
            };
            format!("{kind} {} {}", s.name, s.arity)
        })
        .collect();
    let mut out = format!("structure {}\nelements {}\nsignature {}\n", x.name(), x.elements().join(" "), sig.join(", "));
    for (s, i) in x.signature().symbols().iter().zip(x.interps()) {
        write_interp(&mut out, x.elements(), &s.name, i);
    }
    out
}

pub fn write_relation(name: &str, r: &Relation, elements: &[String]) -> String {
    let mut out = String::new();
    write_interp(&mut out, elements, name, &Interp::Relation(r.clone()));
    out
}

pub fn write_operation(name: &str, h: &PartialOperation, elements: &[String]) -> String {
    let mut out = String::new();
    write_interp(&mut out, elements, name, &Interp::Operation(h.clone()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const THREE: &str = "algebra two\nelements 0 1\nop meet 2\n0 0 -> 0\n0 1 -> 0\n1 0 -> 0\n1 1 -> 1\nop one 0\n-> 1\n";

    #[test]
    fn algebra_round_trip() {
        let items = parse_document(THREE, &|_| None).unwrap();
        let Item::Algebra(a) = &items[0] else { panic!() };
        assert_eq!(a.size(), 2);
        let again = parse_document(&write_algebra(a), &|_| None).unwrap();
        let Item::Algebra(b) = &again[0] else { panic!() };
        assert_eq!(a, b);
    }

    #[test]
    fn ego_and_compact_tuples() {
        let text = format!("{THREE}\nego e over two\nrelation le 2\n00\n01\n11\npartial id 1\n1 -> 1\n");
        let items = parse_document(&text, &|_| None).unwrap();
        let Item::Ego(e) = &items[1] else { panic!() };
        assert_eq!(e.relations()[0].1.len(), 3);
        let a = match &items[0] {
            Item::Algebra(a) => a.clone(),
            _ => panic!(),
        };
        let again = parse_document(&write_ego(e), &|n| (n == "two").then(|| a.clone())).unwrap();
        let Item::Ego(f) = &again[0] else { panic!() };
        assert_eq!(e, f);
    }

    #[test]
    fn incompatible_relation_is_rejected() {
        let text = format!("{THREE}\nego e over two\nrelation r 2\n01\n10\n");
        assert!(parse_document(&text, &|_| None).is_err());
    }

    #[test]
    fn structure_round_trip() {
        let text = "structure X\nelements x y\nsignature partial f 1, relation r 2\npartial f 1\nx -> y\nrelation r 2\nx y\n";
        let items = parse_document(text, &|_| None).unwrap();
        let Item::Structure(x) = &items[0] else { panic!() };
        let again = parse_document(&write_structure(x), &|_| None).unwrap();
        let Item::Structure(y) = &again[0] else { panic!() };
        assert_eq!(x, y);
    }

    #[test]
    fn errors_name_lines() {
        match parse_document("algebra a\nelements 0 1\nop f 1\n0 -> 2\n", &|_| None) {
            Err(Error::Parse { line: 4, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(parse_document("algebra a\nelements 0 1\nop f 1\n0 -> 1\n", &|_| None).is_err());
    }

    #[test]
    fn relation_file() {
        let els: Vec<String> = ["0", "a", "1"].iter().map(|s| s.to_string()).collect();
        let (n, r) = parse_relation("relation r5 5\n00000\n0010a\n011a1\n11111\n", &els).unwrap();
        assert_eq!(n, "r5");
        assert_eq!(r.len(), 4);
        assert!(r.contains(&[0, 0, 2, 0, 1]));
        assert_eq!(parse_relation(&write_relation("r5", &r, &els), &els).unwrap().1, r);
    }
}
