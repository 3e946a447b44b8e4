//! Toolkit for the temporal justification logic LPLTL and its extensions
//! LPLTL* and LPLTL^G.
//!
//! The crate provides:
//!
//! - [`syntax`]: the term and formula languages, an ASCII parser/printer,
//!   and closure-set computation,
//! - [`proof`]: constant specifications and a Hilbert derivation checker
//!   for the three system variants, plus a corpus of checked theorems,
//! - [`semantics`]: finite interpreted systems with lasso runs, a
//!   saturated evidence oracle, and formula evaluation,
//! - [`canon`]: satisfiability and model synthesis via the canonical atom
//!   construction, with model-checked SAT witnesses,
//! - [`internalize`]: necessitation elimination and compilation of checked
//!   derivations into justification terms.

pub mod canon;
pub mod internalize;
pub mod proof;
pub mod semantics;
pub mod syntax;
mod variant;

pub use variant::SystemVariant;
