//! Built-in algebras, alter egos and sentence bases, stored as text in the
//! file format and parsed (and validated) on load.

use crate::algebra::{AlterEgo, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::format::{parse_document, Item};
use crate::uhlogic::{parse_sentences, Labelled, Sentence};

struct Entry {
    name: &'static str,
    description: &'static str,
    text: &'static str,
    sentences: bool,
}

const ENTRIES: &[Entry] = &[
    Entry { name: "three", description: "three-element bounded lattice 0 < a < 1", text: include_str!("../fixtures/three.txt"), sentences: false },
    Entry { name: "three0", description: "alter ego of three with the endomorphisms f, g", text: include_str!("../fixtures/three0.txt"), sentences: false },
    Entry { name: "three_sigma", description: "three0 plus the binary partial operation sigma", text: include_str!("../fixtures/three_sigma.txt"), sentences: false },
    Entry { name: "three_h", description: "three0 plus the binary partial operation h", text: include_str!("../fixtures/three_h.txt"), sentences: false },
    Entry { name: "Q", description: "four-element chain with discriminator, join, meet, 0, 1", text: include_str!("../fixtures/Q.txt"), sentences: false },
    Entry { name: "Q0", description: "alter ego of Q with the graph of f", text: include_str!("../fixtures/Q0.txt"), sentences: false },
    Entry { name: "Q1", description: "alter ego of Q with the partial automorphisms f, g", text: include_str!("../fixtures/Q1.txt"), sentences: false },
    Entry { name: "sigma_basis_three", description: "uH basis for three_sigma, four numbered sentences", text: include_str!("../fixtures/sigma_basis_three.txt"), sentences: true },
    Entry { name: "basis_Q1", description: "uH basis for Q1, three numbered sentences", text: include_str!("../fixtures/basis_Q1.txt"), sentences: true },
];

#[derive(Clone, Debug)]
pub enum Payload {
    Algebra(FiniteAlgebra),
    Ego(AlterEgo),
    /// Labelled sentences; lines sharing a label split one numbered sentence.
    Sentences(Vec<Labelled>),
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub description: String,
    pub payload: Payload,
}

impl Fixture {
    /// Number of distinct labels of a sentence fixture.
    pub fn sentence_groups(&self) -> usize {
        match &self.payload {
            Payload::Sentences(ss) => {
                let mut labels: Vec<Option<&String>> = ss.iter().map(|l| l.label.as_ref()).collect();
                labels.dedup();
                labels.len()
            }
            _ => 0,
        }
    }
}

pub fn fixture_names() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.name).collect()
}

fn entry(name: &str) -> Result<&'static Entry> {
    ENTRIES.iter().find(|e| e.name == name).ok_or_else(|| Error::UnknownFixture(name.to_string()))
}

/// The fixture's text in the file format (or the sentence format).
pub fn fixture_text(name: &str) -> Result<&'static str> {
    Ok(entry(name)?.text)
}

pub fn load_fixture(name: &str) -> Result<Fixture> {
    let e = entry(name)?;
    let payload = if e.sentences {
        Payload::Sentences(parse_sentences(e.text)?)
    } else {
        let items = parse_document(e.text, &|n| algebra(n).ok())?;
        match items.into_iter().next() {
            Some(Item::Algebra(a)) => Payload::Algebra(a),
            Some(Item::Ego(g)) => Payload::Ego(g),
            _ => return Err(Error::Input(format!("fixture `{name}` is malformed"))),
        }
    };
    Ok(Fixture { name: e.name.to_string(), description: e.description.to_string(), payload })
}

pub fn algebra(name: &str) -> Result<FiniteAlgebra> {
    match load_fixture(name)?.payload {
        Payload::Algebra(a) => Ok(a),
        _ => Err(Error::Input(format!("fixture `{name}` is not an algebra"))),
    }
}

pub fn ego(name: &str) -> Result<AlterEgo> {
    match load_fixture(name)?.payload {
        Payload::Ego(e) => Ok(e),
        _ => Err(Error::Input(format!("fixture `{name}` is not an alter ego"))),
    }
}

pub fn sentences(name: &str) -> Result<Vec<Labelled>> {
    match load_fixture(name)?.payload {
        Payload::Sentences(s) => Ok(s),
        _ => Err(Error::Input(format!("fixture `{name}` is not a sentence basis"))),
    }
}

/// The sentences of a basis fixture without labels.
pub fn basis(name: &str) -> Result<Vec<Sentence>> {
    Ok(sentences(name)?.into_iter().map(|l| l.sentence).collect())
}

/// The sentence in a basis fixture carrying `label`.
pub fn labelled(name: &str, label: &str) -> Result<Vec<Sentence>> {
    let out: Vec<Sentence> =
        sentences(name)?.into_iter().filter(|l| l.label.as_deref() == Some(label)).map(|l| l.sentence).collect();
    if out.is_empty() {
        return Err(Error::Input(format!("no sentence labelled `{label}` in `{name}`")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_loads() {
        for n in fixture_names() {
            load_fixture(n).unwrap_or_else(|e| panic!("{n}: {e}"));
        }
        assert!(matches!(load_fixture("nope"), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn fixture_contents() {
        let h = ego("three_h").unwrap();
        let names: Vec<&str> = h.operations().iter().map(|(n, _)| *n).collect();
        assert_eq!(names, ["f", "g", "h"]);
        assert_eq!(load_fixture("sigma_basis_three").unwrap().sentence_groups(), 4);
        assert_eq!(load_fixture("basis_Q1").unwrap().sentence_groups(), 3);
        let q0 = ego("Q0").unwrap();
        assert_eq!(q0.relations().len(), 1);
        assert_eq!(q0.relations()[0].0, "graph_f");
        assert_eq!(algebra("Q").unwrap().size(), 4);
    }
}
