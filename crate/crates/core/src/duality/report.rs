//! Verdicts and reports. Every failing condition carries witnesses written in
//! the input text format so they can be fed back to the parser.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::{FiniteStructure, PartialOperation, Relation};
use crate::error::Error;
use crate::format::{write_operation, write_relation, write_structure};
use crate::uhlogic::Sentence;

pub const SCHEMA: &str = "dualize.report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    /// Fail dominates inconclusive, which dominates pass.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// `relation`, `operation`, `structure`, `sentence` or `note`.
    pub kind: String,
    pub text: String,
}

impl Witness {
    pub fn relation(name: &str, r: &Relation, elements: &[String]) -> Witness {
        Witness { kind: "relation".into(), text: write_relation(name, r, elements) }
    }

    pub fn operation(name: &str, h: &PartialOperation, elements: &[String]) -> Witness {
        Witness { kind: "operation".into(), text: write_operation(name, h, elements) }
    }

    pub fn structure(x: &FiniteStructure) -> Witness {
        Witness { kind: "structure".into(), text: write_structure(x) }
    }

    pub fn sentence(s: &Sentence) -> Witness {
        Witness { kind: "sentence".into(), text: s.to_string() }
    }

    pub fn note(text: impl Into<String>) -> Witness {
        Witness { kind: "note".into(), text: text.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
    pub witnesses: Vec<Witness>,
}

impl Condition {
    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> Condition {
        Condition { name: name.into(), verdict: Verdict::Pass, detail: detail.into(), witnesses: Vec::new() }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>, witnesses: Vec<Witness>) -> Condition {
        Condition { name: name.into(), verdict: Verdict::Fail, detail: detail.into(), witnesses }
    }

    pub fn inconclusive(name: impl Into<String>, detail: impl Into<String>) -> Condition {
        Condition { name: name.into(), verdict: Verdict::Inconclusive, detail: detail.into(), witnesses: Vec::new() }
    }

    /// Pass/fail from a boolean, or inconclusive when the bound was hit.
    /// Other errors are propagated.
    pub fn from_result(
        name: &str,
        r: crate::Result<bool>,
        detail: impl Into<String>,
        witnesses: impl FnOnce() -> Vec<Witness>,
    ) -> crate::Result<Condition> {
        match r {
            Ok(true) => Ok(Condition::pass(name, detail)),
            Ok(false) => Ok(Condition::fail(name, detail, witnesses())),
            Err(Error::BoundExceeded(m)) => Ok(Condition::inconclusive(name, m)),
            Err(e) => Err(e),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub schema: &'static str,
    pub check: String,
    pub subject: String,
    pub verdict: Verdict,
    pub bounds: BTreeMap<String, usize>,
    pub conditions: Vec<Condition>,
}

impl DualityReport {
    pub fn new(check: impl Into<String>, subject: impl Into<String>) -> DualityReport {
        DualityReport {
            schema: SCHEMA,
            check: check.into(),
            subject: subject.into(),
            verdict: Verdict::Pass,
            bounds: BTreeMap::new(),
            conditions: Vec::new(),
        }
    }

    pub fn with_bound(mut self, name: &str, value: usize) -> DualityReport {
        self.bounds.insert(name.to_string(), value);
        self
    }

    pub fn push(&mut self, c: Condition) {
        self.verdict = self.verdict.and(c.verdict);
        self.conditions.push(c);
    }

    /// Appends another report's conditions, each name prefixed.
    pub fn absorb(&mut self, prefix: &str, other: DualityReport) {
        for (k, v) in other.bounds {
            self.bounds.entry(k).or_insert(v);
        }
        for mut c in other.conditions {
            c.name = format!("{prefix}{}", c.name);
            self.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Condition> {
        self.conditions.iter().filter(|c| c.verdict == Verdict::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

impl fmt::Display for DualityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", self.check, self.subject, self.verdict)?;
        if !self.bounds.is_empty() {
            let b: Vec<String> = self.bounds.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, " (at {})", b.join(", "))?;
        }
        writeln!(f)?;
        for c in &self.conditions {
            write!(f, "  [{}] {}", c.verdict, c.name)?;
            if !c.detail.is_empty() {
                write!(f, ": {}", c.detail)?;
            }
            writeln!(f)?;
            for w in &c.witnesses {
                for line in w.text.lines() {
                    writeln!(f, "      {line}")?;
                }
            }
        }
        Ok(())
    }
}
