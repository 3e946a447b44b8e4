//! Constant specifications and the Hilbert derivation checker for the three
//! system variants, plus a corpus of checked theorems.

mod axioms;
mod check;
mod corpus;
mod cs;
pub mod file;
mod taut;

pub use axioms::{axioms_for, match_axiom, match_axiom_with, AxiomName};
pub use check::{
    check_derivation, check_derivation_with, CheckReport, Derivation, Justification, Line,
    LineError,
};
pub use corpus::{box_implies_self_derivation, mix_lemma_derivation, theorem_corpus, CorpusEntry};
pub use cs::{schematic_name, star_condition_formula, ConstantSpecification, CsError};
pub use taut::{is_tautology, TautOverflow, TAUT_ATOM_CAP};
