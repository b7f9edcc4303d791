//! Finite-level duality: the hom-functors and evaluation maps, the duality
//! and full duality checks at an arity bound, `𝕄_α`, transfer between alter
//! egos and the new-from-old construction.

mod full;
mod functors;
mod report;
mod transfer;

pub use full::{
    alpha_domains, build_m_alpha, check_enrichment, check_finite_duality, check_finite_full_duality, check_structural_equivalence,
    r_alpha, MAlpha,
};
pub use functors::{
    check_evaluation_isos, decomposition_certificate, dual_of_algebra, dual_of_structure, evaluation_failure_algebra,
    evaluation_failure_structure, find_majority_term, is_directly_indecomposable,
};
pub use report::{Condition, DualityReport, Verdict, Witness, SCHEMA};
pub use transfer::{
    atom_in_language, check_embedding_counterexample, check_transfer_assumptions, dedupe_columns, purify_labelled,
    run_new_from_old, sharp_enrich, transfer_structure, Added, Direction, NewFromOld, NewFromOldOptions,
    PureSentence, TransferContext,
};
