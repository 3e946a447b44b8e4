//! Atom enumeration: subsets of the closure satisfying the local
//! consistency conditions, generated by constraint propagation with a final
//! full re-check rather than a raw powerset sweep.

use super::CanonError;
use crate::proof::ConstantSpecification;
use crate::syntax::{closure_plus, subformulas, ClosureSet, Formula, Term};
use crate::SystemVariant;

/// Index structures over `Sub+(chi)`.
///
/// The closure list starts with `Sub(chi)` in pre-order (so index 0 is `chi`
/// itself) followed by the added negations. Atoms store one bit per closure
/// member; bits of the added negations are derived from their positive
/// counterparts.
#[derive(Debug)]
pub struct ClosureInfo {
    pub chi: Formula,
    pub set: ClosureSet,
    /// Number of `Sub(chi)` members (a prefix of `set`).
    pub sub_len: usize,
    /// Sub indices of shape `X a`, as `(index, index of a)`.
    pub next_members: Vec<(usize, usize)>,
    /// Sub indices of shape `a U b`, as `(index, index of a, index of b)`.
    pub until_members: Vec<(usize, usize, usize)>,
    /// Sub indices of justification assertions.
    pub just_members: Vec<usize>,
    /// Sub indices of propositions.
    pub prop_members: Vec<usize>,
    /// For every closure index, the closure index of its negation, when the
    /// negation is itself in the closure.
    pub negation_of: Vec<Option<usize>>,
}

impl ClosureInfo {
    pub fn new(chi: &Formula) -> ClosureInfo {
        let sub = subformulas(chi);
        let set = closure_plus(chi);
        let sub_len = sub.len();
        let mut next_members = Vec::new();
        let mut until_members = Vec::new();
        let mut just_members = Vec::new();
        let mut prop_members = Vec::new();
        for (idx, phi) in set.iter().enumerate().take(sub_len) {
            match phi {
                Formula::Next(a) => {
                    next_members.push((idx, set.index_of(a).expect("Sub is closed")));
                }
                Formula::Until(a, b) => until_members.push((
                    idx,
                    set.index_of(a).expect("Sub is closed"),
                    set.index_of(b).expect("Sub is closed"),
                )),
                Formula::Just(_, _, _) => just_members.push(idx),
                Formula::Prop(_) => prop_members.push(idx),
                _ => {}
            }
        }
        let negation_of = set
            .iter()
            .map(|phi| set.index_of(&phi.clone().neg()))
            .collect();
        ClosureInfo {
            chi: chi.clone(),
            set,
            sub_len,
            next_members,
            until_members,
            just_members,
            prop_members,
            negation_of,
        }
    }
}

/// A locally consistent subset of the closure, as a bitset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub id: usize,
    pub bits: u64,
}

impl Atom {
    pub fn contains(&self, index: usize) -> bool {
        self.bits & (1 << index) != 0
    }

    pub fn formulas<'a>(&self, info: &'a ClosureInfo) -> Vec<&'a Formula> {
        (0..info.set.len())
            .filter(|&i| self.contains(i))
            .map(|i| info.set.get(i))
            .collect()
    }
}

/// Default cap on `|Sub(chi)|`.
pub const CLOSURE_CAP: usize = 24;

struct Enumerator<'a> {
    info: &'a ClosureInfo,
    cs: &'a ConstantSpecification,
    order: Vec<usize>,
    assignment: Vec<Option<bool>>,
    atoms: Vec<Atom>,
}

/// Enumerates the atoms over `Sub+(chi)`: maximal, bottom-free subsets that
/// respect implication coherence, the until unfolding, justification
/// closure within the closure set, and specification coherence.
pub fn build_atoms(
    chi: &Formula,
    cs: &ConstantSpecification,
    variant: SystemVariant,
    closure_cap: usize,
) -> Result<(ClosureInfo, Vec<Atom>), CanonError> {
    let info = ClosureInfo::new(chi);
    if info.sub_len > closure_cap {
        return Err(CanonError::ClosureTooLarge {
            size: info.sub_len,
            cap: closure_cap,
        });
    }
    assert!(info.set.len() <= 64, "closure exceeds bitset width");
    let _ = variant; // the variant acts through the specification filter
    let mut order: Vec<usize> = (0..info.sub_len).collect();
    order.sort_by_key(|&i| (info.set.get(i).node_count(), i));
    let mut e = Enumerator {
        info: &info,
        cs,
        order,
        assignment: vec![None; info.sub_len],
        atoms: Vec::new(),
    };
    e.run(0);
    let atoms = e.atoms;
    Ok((info, atoms))
}

impl<'a> Enumerator<'a> {
    fn value(&self, idx: usize) -> Option<bool> {
        self.assignment[idx]
    }

    fn run(&mut self, depth: usize) {
        if depth == self.order.len() {
            if self.check_full() {
                let id = self.atoms.len();
                self.atoms.push(Atom {
                    id,
                    bits: self.to_bits(),
                });
            }
            return;
        }
        let idx = self.order[depth];
        for value in self.candidates(idx) {
            self.assignment[idx] = Some(value);
            self.run(depth + 1);
            self.assignment[idx] = None;
        }
    }

    /// Candidate membership values for a member, given the already-decided
    /// (strictly smaller) members. Forcing here is sound pruning only; the
    /// full conditions are re-checked on the complete assignment.
    fn candidates(&self, idx: usize) -> Vec<bool> {
        match self.info.set.get(idx) {
            Formula::Bottom => vec![false],
            Formula::Implies(a, b) => {
                let va = self.value(self.info.set.index_of(a).unwrap());
                let vb = self.value(self.info.set.index_of(b).unwrap());
                match (va, vb) {
                    (Some(va), Some(vb)) => vec![!va || vb],
                    _ => vec![false, true],
                }
            }
            Formula::Prop(_) | Formula::Next(_) => vec![false, true],
            Formula::Until(a, b) => {
                let va = self.value(self.info.set.index_of(a).unwrap());
                let vb = self.value(self.info.set.index_of(b).unwrap());
                match (va, vb) {
                    (_, Some(true)) => vec![true],
                    (Some(false), Some(false)) => vec![false],
                    _ => vec![false, true],
                }
            }
            phi @ Formula::Just(term, agent, body) => {
                let body_value = self.info.set.index_of(body).and_then(|i| self.value(i));
                let forced_out = body_value == Some(false);
                let forced_in = self.justification_forced_in(phi, term, *agent);
                match (forced_in, forced_out) {
                    (true, true) => vec![],
                    (true, false) => vec![true],
                    (false, true) => vec![false],
                    (false, false) => vec![false, true],
                }
            }
        }
    }

    fn justification_forced_in(
        &self,
        phi: &Formula,
        term: &Term,
        agent: crate::syntax::AgentId,
    ) -> bool {
        let Formula::Just(_, _, body) = phi else {
            unreachable!()
        };
        // specification coherence
        if let Term::Const(c) = term {
            if self.cs.lookup(c, agent, body) {
                return true;
            }
        }
        let decided_true = |candidate: &Formula| {
            self.info
                .set
                .index_of(candidate)
                .and_then(|i| self.value(i))
                == Some(true)
        };
        match term {
            // positive introspection: [!s]_i [s]_i a forced by [s]_i a
            Term::Bang(inner) => match body.as_ref() {
                Formula::Just(t, i, _) if t == inner.as_ref() && *i == agent => decided_true(body),
                _ => false,
            },
            // sum: [t+s]_i a forced by either side, when present in the closure
            Term::Sum(left, right) => {
                decided_true(&Formula::just(
                    left.as_ref().clone(),
                    agent,
                    body.as_ref().clone(),
                )) || decided_true(&Formula::just(
                    right.as_ref().clone(),
                    agent,
                    body.as_ref().clone(),
                ))
            }
            // application: [t.s]_i b forced by [t]_i (a -> b) and [s]_i a
            Term::App(left, right) => self.app_premises_hold(left, right, agent, body),
            _ => false,
        }
    }

    fn app_premises_hold(
        &self,
        left: &Term,
        right: &Term,
        agent: crate::syntax::AgentId,
        conclusion: &Formula,
    ) -> bool {
        for &j in &self.info.just_members {
            if self.value(j) != Some(true) {
                continue;
            }
            let Formula::Just(t, i, inner) = self.info.set.get(j) else {
                continue;
            };
            if t != left || *i != agent {
                continue;
            }
            let Formula::Implies(premise, concl) = inner.as_ref() else {
                continue;
            };
            if concl.as_ref() != conclusion {
                continue;
            }
            let arg = Formula::just(right.clone(), agent, premise.as_ref().clone());
            if self.info.set.index_of(&arg).and_then(|k| self.value(k)) == Some(true) {
                return true;
            }
        }
        false
    }

    /// Authoritative re-check of all local conditions on a complete
    /// assignment. Catches cases the incremental forcing cannot see (for
    /// example application premises decided after their conclusion).
    fn check_full(&self) -> bool {
        for idx in 0..self.info.sub_len {
            let value = self.value(idx).expect("complete assignment");
            match self.info.set.get(idx) {
                Formula::Bottom => {
                    if value {
                        return false;
                    }
                }
                Formula::Implies(a, b) => {
                    let va = self.value(self.info.set.index_of(a).unwrap()).unwrap();
                    let vb = self.value(self.info.set.index_of(b).unwrap()).unwrap();
                    if value != (!va || vb) {
                        return false;
                    }
                }
                Formula::Until(a, b) => {
                    let va = self.value(self.info.set.index_of(a).unwrap()).unwrap();
                    let vb = self.value(self.info.set.index_of(b).unwrap()).unwrap();
                    // until forces one of its arms now; the deferral burden
                    // moves to the next-step relation
                    if value && !(vb || va) {
                        return false;
                    }
                    if vb && !value {
                        return false;
                    }
                }
                phi @ Formula::Just(term, agent, body) => {
                    let vbody = self.value(self.info.set.index_of(body).unwrap()).unwrap();
                    if value && !vbody {
                        return false; // reflexivity within the atom
                    }
                    if !value && self.justification_forced_in(phi, term, *agent) {
                        return false;
                    }
                }
                Formula::Prop(_) | Formula::Next(_) => {}
            }
        }
        true
    }

    fn to_bits(&self) -> u64 {
        let mut bits = 0u64;
        for idx in 0..self.info.sub_len {
            if self.assignment[idx] == Some(true) {
                bits |= 1 << idx;
            }
        }
        // added negations mirror their positives
        for idx in self.info.sub_len..self.info.set.len() {
            let phi = self.info.set.get(idx);
            let positive = phi.as_neg().expect("added members are negations");
            let pos_idx = self
                .info
                .set
                .index_of(positive)
                .expect("positive is in Sub");
            if self.assignment[pos_idx] != Some(true) {
                bits |= 1 << idx;
            }
        }
        bits
    }
}
