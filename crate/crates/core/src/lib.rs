//! Finite-level natural duality theory: compatible relations and partial
//! operations, partial clones, conjunct-atomic definability, universal Horn
//! sentences, and the duality checks built on them.

pub mod algebra;
pub mod catalog;
pub mod clone;
pub mod definability;
pub mod duality;
pub mod error;
pub mod format;
pub mod par;
pub mod uhlogic;

pub use error::{Error, Result};
