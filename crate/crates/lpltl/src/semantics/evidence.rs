//! The saturated evidence oracle.
//!
//! `ev_member` decides membership in the least evidence function that
//! extends the declared seeds and satisfies the closure conditions:
//! monotonicity along each accessibility relation, constant specification
//! entries, application, sum, positive introspection, and (for the star
//! variant) the star condition. Monotonicity is realized by pulling seeds
//! along predecessors inside the query instead of requiring callers to close
//! their seed sets.

use std::collections::BTreeSet;

use super::InterpretedSystem;
use crate::syntax::{AgentId, Formula, Term};
use crate::SystemVariant;

/// Cap on oracle recursion depth. Exceeding it is an error, not a silent
/// false.
pub const EV_DEPTH_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("term operator `{op}` has no evidence semantics in variant {variant}")]
    UnsupportedTerm {
        op: &'static str,
        variant: SystemVariant,
    },
    #[error("evidence recursion exceeded depth cap {cap}")]
    DepthExceeded { cap: usize },
}

/// Operators the oracle can interpret under the given variant: the base
/// operators always, star chains only in the star variant, and the
/// interaction operators never (no semantics is defined for them).
fn check_semantic_ops(term: &Term, variant: SystemVariant) -> Result<(), EvalError> {
    match term {
        Term::Const(_) | Term::Var(_) => Ok(()),
        Term::Bang(t) => check_semantic_ops(t, variant),
        Term::Sum(a, b) | Term::App(a, b) => {
            check_semantic_ops(a, variant)?;
            check_semantic_ops(b, variant)
        }
        Term::Star(t) => {
            if variant == SystemVariant::LpltlStar {
                check_semantic_ops(t, variant)
            } else {
                Err(EvalError::UnsupportedTerm { op: "*", variant })
            }
        }
        Term::Down(_) => Err(EvalError::UnsupportedTerm { op: "dn", variant }),
        Term::Up(_) => Err(EvalError::UnsupportedTerm { op: "up", variant }),
        Term::RArr(_) => Err(EvalError::UnsupportedTerm { op: "rr", variant }),
        Term::LArr(_) => Err(EvalError::UnsupportedTerm { op: "ll", variant }),
    }
}

impl InterpretedSystem {
    /// Is `phi` in the saturated evidence set of `(agent, state, term)`?
    pub fn ev_member(
        &self,
        agent: AgentId,
        state: usize,
        term: &Term,
        phi: &Formula,
    ) -> Result<bool, EvalError> {
        check_semantic_ops(term, self.variant)?;
        self.ev_member_at(agent, state, term, phi, 0)
    }

    fn seed_hit(&self, agent: AgentId, state: usize, term: &Term, phi: &Formula) -> bool {
        (0..self.frame.num_states())
            .any(|v| self.frame.related(agent, v, state) && self.base.contains(agent, v, term, phi))
    }

    fn ev_member_at(
        &self,
        agent: AgentId,
        state: usize,
        term: &Term,
        phi: &Formula,
        depth: usize,
    ) -> Result<bool, EvalError> {
        if depth > EV_DEPTH_CAP {
            return Err(EvalError::DepthExceeded { cap: EV_DEPTH_CAP });
        }
        let key = (agent.get(), state, term.clone(), phi.clone());
        if let Some(&cached) = self.memo.lock().unwrap().get(&key) {
            return Ok(cached);
        }
        let result = self.ev_member_uncached(agent, state, term, phi, depth)?;
        self.memo.lock().unwrap().insert(key, result);
        Ok(result)
    }

    fn ev_member_uncached(
        &self,
        agent: AgentId,
        state: usize,
        term: &Term,
        phi: &Formula,
        depth: usize,
    ) -> Result<bool, EvalError> {
        if self.seed_hit(agent, state, term, phi) {
            return Ok(true);
        }
        match term {
            Term::Const(c) => Ok(self.cs.lookup(c, agent, phi)),
            Term::Var(_) => Ok(false),
            Term::Sum(a, b) => Ok(self.ev_member_at(agent, state, a, phi, depth + 1)?
                || self.ev_member_at(agent, state, b, phi, depth + 1)?),
            Term::Bang(inner) => match phi {
                Formula::Just(t, i, body) if t == inner.as_ref() && *i == agent => {
                    self.ev_member_at(agent, state, inner, body, depth + 1)
                }
                _ => Ok(false),
            },
            Term::App(a, b) => {
                // route 1: implications known for `a`, argument checked on `b`
                for implication in self.enumerate_evidence(agent, state, a, depth + 1)? {
                    if let Formula::Implies(premise, conclusion) = &implication {
                        if **conclusion == *phi
                            && self.ev_member_at(agent, state, b, premise, depth + 1)?
                        {
                            return Ok(true);
                        }
                    }
                }
                // route 2: arguments known for `b`, implication checked on `a`
                for premise in self.enumerate_evidence(agent, state, b, depth + 1)? {
                    let implication = premise.implies(phi.clone());
                    if self.ev_member_at(agent, state, a, &implication, depth + 1)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Term::Star(_) => {
                let Some((levels, constant)) = term.as_star_chain() else {
                    // star over a non-constant term: no closure clause applies
                    return Ok(false);
                };
                Ok(self.star_condition_holds(constant, levels, phi))
            }
            Term::Down(_) | Term::Up(_) | Term::RArr(_) | Term::LArr(_) => {
                unreachable!("rejected by check_semantic_ops")
            }
        }
    }

    /// Does `phi` have the shape `G [*^(n-1) c]_{j_(n-1)} G ... G [c]_{j_0} psi`
    /// with `[c]_{j_0} psi` in the specification? This is what `*^n c`
    /// (`n = levels >= 1`) carries at every state.
    fn star_condition_holds(&self, constant: &str, levels: usize, phi: &Formula) -> bool {
        debug_assert!(levels >= 1);
        let Some(mut current) = phi.as_always() else {
            return false;
        };
        for level in (1..levels).rev() {
            let Formula::Just(t, _, body) = current else {
                return false;
            };
            match t.as_star_chain() {
                Some((depth, name)) if depth == level && name == constant => {}
                _ => return false,
            }
            let Some(next) = body.as_always() else {
                return false;
            };
            current = next;
        }
        match current {
            Formula::Just(Term::Const(c), j0, psi) if c == constant => {
                self.cs.lookup(constant, *j0, psi)
            }
            _ => false,
        }
    }

    /// The finitely enumerable part of the evidence set of
    /// `(agent, state, term)`. Exact for finite specifications; under a
    /// schematic specification the contribution of a constant covers the
    /// instances recorded so far, since the full instance set is infinite.
    pub fn enumerate_evidence(
        &self,
        agent: AgentId,
        state: usize,
        term: &Term,
        depth: usize,
    ) -> Result<BTreeSet<Formula>, EvalError> {
        if depth > EV_DEPTH_CAP {
            return Err(EvalError::DepthExceeded { cap: EV_DEPTH_CAP });
        }
        let mut out: BTreeSet<Formula> = BTreeSet::new();
        for v in 0..self.frame.num_states() {
            if self.frame.related(agent, v, state) {
                out.extend(self.base.formulas_at(agent, v, term).cloned());
            }
        }
        match term {
            Term::Const(c) => {
                out.extend(self.cs.instances(c, agent));
            }
            Term::Var(_) => {}
            Term::Sum(a, b) => {
                out.extend(self.enumerate_evidence(agent, state, a, depth + 1)?);
                out.extend(self.enumerate_evidence(agent, state, b, depth + 1)?);
            }
            Term::Bang(inner) => {
                for psi in self.enumerate_evidence(agent, state, inner, depth + 1)? {
                    out.insert(Formula::just(inner.as_ref().clone(), agent, psi));
                }
            }
            Term::App(a, b) => {
                for implication in self.enumerate_evidence(agent, state, a, depth + 1)? {
                    if let Formula::Implies(premise, conclusion) = &implication {
                        if self.ev_member_at(agent, state, b, premise, depth + 1)? {
                            out.insert(conclusion.as_ref().clone());
                        }
                    }
                }
            }
            Term::Star(_) => {
                if let Some((levels, constant)) = term.as_star_chain() {
                    out.extend(self.enumerate_star_chains(constant, levels, agent));
                }
            }
            Term::Down(_) | Term::Up(_) | Term::RArr(_) | Term::LArr(_) => {
                return Err(EvalError::UnsupportedTerm {
                    op: "dn/up/rr/ll",
                    variant: self.variant,
                })
            }
        }
        Ok(out)
    }

    fn enumerate_star_chains(
        &self,
        constant: &str,
        levels: usize,
        _agent: AgentId,
    ) -> BTreeSet<Formula> {
        use crate::proof::star_condition_formula;
        let h = self.agents();
        let mut out = BTreeSet::new();
        for j0 in 1..=h {
            let j0 = AgentId::new(j0);
            for psi in self.cs.instances(constant, j0) {
                // inner agent tuples (j_1 .. j_(n-1)) over all agents
                let mut tuples: Vec<Vec<AgentId>> = vec![vec![j0]];
                for _ in 1..levels {
                    let mut next = Vec::new();
                    for tuple in &tuples {
                        for j in 1..=h {
                            let mut extended = tuple.clone();
                            extended.push(AgentId::new(j));
                            next.push(extended);
                        }
                    }
                    tuples = next;
                }
                for tuple in tuples {
                    out.insert(star_condition_formula(constant, &tuple, &psi));
                }
            }
        }
        out
    }
}
