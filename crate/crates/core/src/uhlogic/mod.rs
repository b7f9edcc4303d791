//! Universal Horn sentences: syntax, the text format, purification, model
//! checking, premise relations, naturalisation and finite-model search.

mod eval;
mod natural;
mod parser;
mod purify;
mod search;
mod syntax;

pub use eval::{counterexample, models, premise_relation, HornShape, Query};
pub use natural::{models_naturalized, naturalize, naturalized_premise_relation, NaturalizedSentence};
pub use parser::{parse_sentence, parse_sentences};
pub use purify::{is_pure, purify};
pub use search::{for_each_model, in_finite_dual_class, validate_basis, BasisVerdict};
pub use syntax::{print_sentence, Atom, Labelled, Sentence, Term};
