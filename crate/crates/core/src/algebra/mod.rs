//! Finite algebras, relations, partial operations and structures, with
//! subuniverse generation and exhaustive homomorphism enumeration.

mod ego;
mod finite_algebra;
mod operation;
mod relation;
mod structure;

pub use ego::AlterEgo;
pub use finite_algebra::{FiniteAlgebra, Operation};
pub use operation::PartialOperation;
pub use relation::{all_tuples, bijective_projection, decode, encode, power_size, Elem, Relation};
pub use structure::{FiniteStructure, Interp, Signature, Symbol, SymbolKind};


/// `hom_set` as a free function.
pub fn hom_set(m: &FiniteAlgebra, r: &Relation) -> crate::Result<Vec<PartialOperation>> {
    m.hom_set(r)
}

/// Morphisms `X → Y` between finite structures of one signature.
pub fn structure_homs(x: &FiniteStructure, y: &FiniteStructure) -> crate::Result<Vec<Vec<Elem>>> {
    x.homs_to(y)
}

/// `X^k`, operations and relations coordinatewise.
pub fn build_power(x: &FiniteStructure, k: usize) -> crate::Result<FiniteStructure> {
    x.power(k)
}
