//! The satisfiability pipeline: atoms, next relation, acceptable lassos,
//! extraction, and verification of every SAT witness by the evaluator.

use serde::Serialize;

use super::atoms::{build_atoms, CLOSURE_CAP};
use super::extract::extract_model;
use super::graph::{build_next, find_acceptable_lassos};
use super::CanonError;
use crate::proof::ConstantSpecification;
use crate::semantics::InterpretedSystem;
use crate::syntax::Formula;
use crate::SystemVariant;

#[derive(Debug, Clone, Copy)]
pub struct DecideConfig {
    pub agents: u32,
    pub closure_cap: usize,
    /// Bound on acceptable lassos gathered into the run set, one per
    /// self-fulfilling component choice.
    pub lasso_cap: usize,
    /// How many failed witness verifications to tolerate before treating the
    /// run as an internal error. Failed candidates are never retried
    /// silently: they are counted and surfaced in the report.
    pub mismatch_threshold: usize,
}

impl Default for DecideConfig {
    fn default() -> Self {
        DecideConfig {
            agents: 2,
            closure_cap: CLOSURE_CAP,
            lasso_cap: 64,
            mismatch_threshold: 256,
        }
    }
}

/// Counters from a decision run.
#[derive(Debug, Clone, Default, Serialize)]
pub struct DecideStats {
    pub closure_size: usize,
    pub atoms_generated: usize,
    pub atoms_retained: usize,
    pub atoms_pruned: usize,
    pub sccs_examined: usize,
    pub candidates_tried: usize,
    pub verification_failures: usize,
}

/// The decision outcome: a verified model or a no-model report.
#[derive(Debug)]
pub enum Certificate {
    /// A satisfying interpreted system; the query holds at position 0 of
    /// `system.runs[witness]`, re-verified by the evaluator.
    Sat {
        system: Box<InterpretedSystem>,
        witness: usize,
        stats: DecideStats,
    },
    NoModel {
        stats: DecideStats,
    },
}

impl Certificate {
    pub fn is_sat(&self) -> bool {
        matches!(self, Certificate::Sat { .. })
    }

    pub fn stats(&self) -> &DecideStats {
        match self {
            Certificate::Sat { stats, .. } | Certificate::NoModel { stats } => stats,
        }
    }
}

/// Decides satisfiability of `chi` by the canonical construction and
/// returns either a verified model or a no-model report.
pub fn decide(
    chi: &Formula,
    cs: &ConstantSpecification,
    variant: SystemVariant,
    config: &DecideConfig,
) -> Result<Certificate, CanonError> {
    // the extracted frame needs a relation for every agent the query mentions
    let agents = config.agents.max(chi.max_agent());
    let (info, raw_atoms) = build_atoms(chi, cs, variant, config.closure_cap)?;
    let mut stats = DecideStats {
        closure_size: info.sub_len,
        atoms_generated: raw_atoms.len(),
        ..DecideStats::default()
    };
    let graph = build_next(&info, raw_atoms);
    stats.atoms_retained = graph.atoms.len();
    stats.atoms_pruned = graph.pruned;

    let chi_idx = info.set.index_of(chi).expect("chi is in its own closure");
    let starts: Vec<usize> = (0..graph.atoms.len())
        .filter(|&v| graph.atoms[v].contains(chi_idx))
        .collect();
    stats.sccs_examined = graph.sccs().len();

    // background runs: one loop per self-fulfilling component anywhere in
    // the pruned graph, approximating the canonical system's full run set
    let background = graph.fulfilling_loops(&info, config.lasso_cap);

    for start in starts {
        let candidates = find_acceptable_lassos(&graph, &info, start, config.lasso_cap);
        for witness in candidates {
            stats.candidates_tried += 1;
            let mut lassos = vec![witness];
            for extra in &background {
                if !lassos.contains(extra) {
                    lassos.push(extra.clone());
                }
            }
            let system = extract_model(&graph, &info, &lassos, cs, variant, agents)?;
            if system.eval(&system.runs[0], 0, chi)? {
                return Ok(Certificate::Sat {
                    system: Box::new(system),
                    witness: 0,
                    stats,
                });
            }
            stats.verification_failures += 1;
            if stats.verification_failures > config.mismatch_threshold {
                return Err(CanonError::VerificationMismatch {
                    failures: stats.verification_failures,
                    threshold: config.mismatch_threshold,
                });
            }
        }
    }
    Ok(Certificate::NoModel { stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{AgentId, Term};

    fn cs() -> ConstantSpecification {
        ConstantSpecification::schematic(SystemVariant::Lpltl)
    }

    fn config() -> DecideConfig {
        DecideConfig::default()
    }

    fn p() -> Formula {
        Formula::prop("P")
    }

    fn q() -> Formula {
        Formula::prop("Q")
    }

    #[test]
    fn bottom_has_no_model() {
        let cert = decide(&Formula::Bottom, &cs(), SystemVariant::Lpltl, &config()).unwrap();
        assert!(!cert.is_sat());
    }

    #[test]
    fn justified_proposition_is_satisfiable() {
        let chi = Formula::just(Term::var("x"), AgentId::new(1), p());
        let cert = decide(&chi, &cs(), SystemVariant::Lpltl, &config()).unwrap();
        match cert {
            Certificate::Sat {
                system, witness, ..
            } => {
                assert_eq!(system.eval(&system.runs[witness], 0, &chi), Ok(true));
                assert!(system.validate().is_valid());
            }
            Certificate::NoModel { stats } => panic!("expected SAT, got NOMODEL: {stats:?}"),
        }
    }

    #[test]
    fn until_reflexivity_violation_has_no_model() {
        // P & ~(P U P): the unfolding forces P U P whenever P holds
        let chi = p().and(p().until(p()).neg());
        let cert = decide(&chi, &cs(), SystemVariant::Lpltl, &config()).unwrap();
        assert!(!cert.is_sat());
    }

    #[test]
    fn liveness_with_invariant_is_satisfiable() {
        // F P & G (P -> X P)
        let chi = p().eventually().and(p().implies(p().next()).always());
        let cert = decide(&chi, &cs(), SystemVariant::Lpltl, &config()).unwrap();
        match cert {
            Certificate::Sat {
                system, witness, ..
            } => {
                assert_eq!(system.eval(&system.runs[witness], 0, &chi), Ok(true));
            }
            Certificate::NoModel { stats } => panic!("expected SAT: {stats:?}"),
        }
    }

    #[test]
    fn negated_valid_formula_has_no_model() {
        // ~(G P -> P)
        let chi = p().always().implies(p()).neg();
        let cert = decide(&chi, &cs(), SystemVariant::Lpltl, &config()).unwrap();
        assert!(!cert.is_sat());
    }

    #[test]
    fn plain_until_is_satisfiable() {
        let chi = p().until(q());
        let cert = decide(&chi, &cs(), SystemVariant::Lpltl, &config()).unwrap();
        match cert {
            Certificate::Sat {
                system, witness, ..
            } => {
                assert_eq!(system.eval(&system.runs[witness], 0, &chi), Ok(true));
            }
            Certificate::NoModel { stats } => panic!("expected SAT: {stats:?}"),
        }
    }

    #[test]
    fn wide_agent_indices_extend_the_frame() {
        let chi = Formula::just(Term::var("x"), AgentId::new(5), p());
        let cert = decide(&chi, &cs(), SystemVariant::Lpltl, &config()).unwrap();
        match cert {
            Certificate::Sat {
                system, witness, ..
            } => {
                assert_eq!(system.agents(), 5);
                assert_eq!(system.eval(&system.runs[witness], 0, &chi), Ok(true));
            }
            Certificate::NoModel { stats } => panic!("expected SAT: {stats:?}"),
        }
    }
}
