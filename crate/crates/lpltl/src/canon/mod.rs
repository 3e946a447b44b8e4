//! Satisfiability and model synthesis via the canonical atom construction:
//! atoms over the closure of the query, the next-step relation, acceptable
//! lassos found through self-fulfilling strongly connected subgraphs, model
//! extraction, and witness verification.
//!
//! SAT answers are always backed by a model-checked witness. NOMODEL answers
//! are exact for the purely temporal fragment; for justification-heavy
//! queries the local atom conditions approximate full consistency, so a
//! NOMODEL there is heuristic-grade (candidates whose extraction fails
//! verification are counted and reported).

mod atoms;
mod decide;
mod extract;
mod graph;

pub use atoms::{build_atoms, Atom, ClosureInfo};
pub use decide::{decide, Certificate, DecideConfig, DecideStats};
pub use extract::extract_model;
pub use graph::{build_next, find_acceptable_lassos, lasso_is_acceptable, AtomGraph};

use crate::semantics::{EvalError, ValidationReport};

#[derive(Debug, thiserror::Error)]
pub enum CanonError {
    #[error("closure has {size} subformulas, cap is {cap}")]
    ClosureTooLarge { size: usize, cap: usize },
    #[error("extracted system failed validation (internal error): {report}")]
    InvalidExtraction { report: ValidationReport },
    #[error("{failures} SAT candidates failed verification (threshold {threshold}); giving up")]
    VerificationMismatch { failures: usize, threshold: usize },
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
}
