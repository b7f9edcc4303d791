use super::finite_algebra::FiniteAlgebra;
use super::operation::PartialOperation;
use super::relation::Relation;
use super::structure::{FiniteStructure, Interp, Symbol, SymbolKind};
use crate::error::{input, Error, Result};

/// An alter ego of a finite algebra: compatible partial operations and
/// relations on its carrier, held as a structure. The topology is discrete
/// and left implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlterEgo {
    algebra: FiniteAlgebra,
    structure: FiniteStructure,
}

impl AlterEgo {
    /// Validates compatibility of every symbol with `algebra`.
    pub fn new(name: impl Into<String>, algebra: FiniteAlgebra, symbols: Vec<(String, Interp)>) -> Result<Self> {
        for (n, i) in &symbols {
            let rel = i.as_relation();
            if rel.universe() != algebra.size() {
                return input(format!("`{n}` lives on another carrier"));
            }
            if !algebra.is_subuniverse(&rel)? {
                return input(format!("`{n}` is not compatible with `{}`", algebra.name()));
            }
        }
        let structure = FiniteStructure::from_symbols(name, algebra.elements().to_vec(), symbols)?;
        Ok(AlterEgo { algebra, structure })
    }

    pub fn name(&self) -> &str {
        self.structure.name()
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    /// The ego viewed as a finite structure.
    pub fn structure(&self) -> &FiniteStructure {
        &self.structure
    }

    pub fn symbols(&self) -> impl Iterator<Item = (&Symbol, &Interp)> {
        self.structure.signature().symbols().iter().zip(self.structure.interps())
    }

    /// The partial operations `H`.
    pub fn operations(&self) -> Vec<(&str, &PartialOperation)> {
        self.symbols()
            .filter_map(|(s, i)| match i {
                Interp::Operation(h) => Some((s.name.as_str(), h)),
                _ => None,
            })
            .collect()
    }

    /// The relations `R`.
    pub fn relations(&self) -> Vec<(&str, &Relation)> {
        self.symbols()
            .filter_map(|(s, i)| match i {
                Interp::Relation(r) => Some((s.name.as_str(), r)),
                _ => None,
            })
            .collect()
    }

    /// `R ∪ dom H`, labelled, in declaration order.
    pub fn relations_and_domains(&self) -> Vec<(String, Relation)> {
        self.symbols()
            .map(|(s, i)| match i {
                Interp::Relation(r) => (s.name.clone(), r.clone()),
                Interp::Operation(h) => (format!("dom {}", s.name), h.domain().clone()),
            })
            .collect()
    }

    /// A new ego with extra symbols appended.
    pub fn extended(&self, name: impl Into<String>, extra: Vec<(String, Interp)>) -> Result<AlterEgo> {
        let mut symbols: Vec<(String, Interp)> = self
            .symbols()
            .map(|(s, i)| (s.name.clone(), i.clone()))
            .collect();
        symbols.extend(extra);
        AlterEgo::new(name, self.algebra.clone(), symbols)
    }

    /// Keeps only the named symbols.
    pub fn reduct(&self, name: impl Into<String>, names: &[&str]) -> Result<AlterEgo> {
        let mut symbols = Vec::new();
        for &n in names {
            let i = self.structure.interp(n).ok_or_else(|| Error::UnknownSymbol(n.to_string()))?;
            symbols.push((n.to_string(), i.clone()));
        }
        AlterEgo::new(name, self.algebra.clone(), symbols)
    }

    pub fn has_nullary(&self) -> bool {
        self.symbols().any(|(s, _)| s.kind == SymbolKind::Operation && s.arity == 0)
    }

    pub(crate) fn same_algebra(&self, other: &AlterEgo) -> Result<()> {
        if self.algebra != other.algebra {
            return input(format!(
                "`{}` and `{}` are alter egos of different algebras",
                self.name(),
                other.name()
            ));
        }
        Ok(())
    }
}
