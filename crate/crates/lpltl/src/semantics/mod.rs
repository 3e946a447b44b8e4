//! Finite interpreted systems: frames with preorder accessibility relations,
//! infinite runs represented as lassos, a saturated evidence oracle, and the
//! truth definition.

mod eval;
mod evidence;
pub mod file;
mod validate;

pub use evidence::{EvalError, EV_DEPTH_CAP};
pub use validate::{ValidationReport, Violation};

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Mutex;

use crate::proof::ConstantSpecification;
use crate::syntax::{AgentId, Formula, Term};
use crate::SystemVariant;

/// Accessibility structure: a non-empty state set and one relation per agent.
/// The relations are required to be reflexive and transitive; this is
/// validated, not assumed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    state_names: Vec<String>,
    /// `rel[agent - 1][state]` is the successor set of `state`.
    rel: Vec<Vec<BTreeSet<usize>>>,
}

impl Frame {
    pub fn new(state_names: Vec<String>, agents: u32) -> Frame {
        let n = state_names.len();
        Frame {
            state_names,
            rel: vec![vec![BTreeSet::new(); n]; agents as usize],
        }
    }

    pub fn agents(&self) -> u32 {
        self.rel.len() as u32
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn state_name(&self, state: usize) -> &str {
        &self.state_names[state]
    }

    pub fn state_by_name(&self, name: &str) -> Option<usize> {
        self.state_names.iter().position(|n| n == name)
    }

    pub fn add_edge(&mut self, agent: AgentId, from: usize, to: usize) {
        self.rel[(agent.get() - 1) as usize][from].insert(to);
    }

    pub fn related(&self, agent: AgentId, from: usize, to: usize) -> bool {
        self.rel[(agent.get() - 1) as usize][from].contains(&to)
    }

    pub fn successors(&self, agent: AgentId, from: usize) -> impl Iterator<Item = usize> + '_ {
        self.rel[(agent.get() - 1) as usize][from].iter().copied()
    }

    /// Adds all reflexive pairs and closes transitively. Used by generators
    /// and the canonical extraction; files are validated instead.
    pub fn close_preorder(&mut self) {
        let n = self.num_states();
        for rel in &mut self.rel {
            for (s, succ) in rel.iter_mut().enumerate() {
                succ.insert(s);
            }
            loop {
                let mut changed = false;
                for v in 0..n {
                    let step: Vec<usize> = rel[v]
                        .iter()
                        .flat_map(|&w| rel[w].iter().copied())
                        .collect();
                    for u in step {
                        changed |= rel[v].insert(u);
                    }
                }
                if !changed {
                    break;
                }
            }
        }
    }
}

/// An infinite run `prefix . loop^omega` over frame states.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LassoRun {
    pub prefix: Vec<usize>,
    pub looping: Vec<usize>,
}

impl LassoRun {
    pub fn new(prefix: Vec<usize>, looping: Vec<usize>) -> LassoRun {
        assert!(!looping.is_empty(), "lasso loops must be non-empty");
        LassoRun { prefix, looping }
    }

    /// Number of canonical positions: beyond it, states and futures repeat.
    pub fn period(&self) -> usize {
        self.prefix.len() + self.looping.len()
    }

    /// The state at any position `n >= 0`.
    pub fn state_at(&self, n: usize) -> usize {
        if n < self.prefix.len() {
            self.prefix[n]
        } else {
            self.looping[(n - self.prefix.len()) % self.looping.len()]
        }
    }

    /// Folds a position into the canonical range `0..period()`.
    pub fn normalize(&self, n: usize) -> usize {
        if n < self.period() {
            n
        } else {
            self.prefix.len() + (n - self.prefix.len()) % self.looping.len()
        }
    }
}

/// User-declared evidence seeds: per agent and state, a finite map from
/// terms to admitted formulas. The oracle closes over these.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EvidenceBase {
    entries: BTreeMap<(u32, usize), BTreeMap<Term, BTreeSet<Formula>>>,
}

impl EvidenceBase {
    pub fn new() -> EvidenceBase {
        EvidenceBase::default()
    }

    pub fn add(&mut self, agent: AgentId, state: usize, term: Term, phi: Formula) {
        self.entries
            .entry((agent.get(), state))
            .or_default()
            .entry(term)
            .or_default()
            .insert(phi);
    }

    pub fn contains(&self, agent: AgentId, state: usize, term: &Term, phi: &Formula) -> bool {
        self.entries
            .get(&(agent.get(), state))
            .and_then(|by_term| by_term.get(term))
            .is_some_and(|set| set.contains(phi))
    }

    pub fn formulas_at(
        &self,
        agent: AgentId,
        state: usize,
        term: &Term,
    ) -> impl Iterator<Item = &Formula> {
        self.entries
            .get(&(agent.get(), state))
            .and_then(|by_term| by_term.get(term))
            .into_iter()
            .flatten()
    }

    /// All `(agent, state, term, formula)` seed facts, sorted.
    pub fn iter(&self) -> impl Iterator<Item = (AgentId, usize, &Term, &Formula)> {
        self.entries.iter().flat_map(|(&(agent, state), by_term)| {
            by_term.iter().flat_map(move |(term, set)| {
                set.iter()
                    .map(move |phi| (AgentId::new(agent), state, term, phi))
            })
        })
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

type EvKey = (u32, usize, Term, Formula);

/// A finite interpreted system: frame, lasso runs, evidence seeds behind a
/// saturating oracle, valuation, constant specification, and variant.
///
/// Values are immutable after construction; the evidence memo table behind
/// the oracle is the only mutable part and its inserts are idempotent.
#[derive(Debug)]
pub struct InterpretedSystem {
    pub frame: Frame,
    pub runs: Vec<LassoRun>,
    pub base: EvidenceBase,
    pub valuation: Vec<BTreeSet<String>>,
    pub cs: ConstantSpecification,
    pub variant: SystemVariant,
    pub(crate) memo: Mutex<HashMap<EvKey, bool>>,
}

impl InterpretedSystem {
    pub fn new(
        frame: Frame,
        runs: Vec<LassoRun>,
        base: EvidenceBase,
        valuation: Vec<BTreeSet<String>>,
        cs: ConstantSpecification,
        variant: SystemVariant,
    ) -> InterpretedSystem {
        InterpretedSystem {
            frame,
            runs,
            base,
            valuation,
            cs,
            variant,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn agents(&self) -> u32 {
        self.frame.agents()
    }

    /// The same system under a different variant. Used by the conservativity
    /// checks, which re-read a base system as a star system: that enables the
    /// star clause of the evidence oracle, the least extension described by
    /// the conservativity lemma.
    pub fn with_variant(&self, variant: SystemVariant) -> InterpretedSystem {
        InterpretedSystem::new(
            self.frame.clone(),
            self.runs.clone(),
            self.base.clone(),
            self.valuation.clone(),
            self.cs.clone(),
            variant,
        )
    }
}

impl Clone for InterpretedSystem {
    fn clone(&self) -> Self {
        self.with_variant(self.variant)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lasso_positions() {
        let run = LassoRun::new(vec![0], vec![1, 2]);
        assert_eq!(run.period(), 3);
        assert_eq!(run.state_at(0), 0);
        assert_eq!(run.state_at(1), 1);
        assert_eq!(run.state_at(2), 2);
        assert_eq!(run.state_at(3), 1);
        assert_eq!(run.state_at(4), 2);
        assert_eq!(run.normalize(5), 1);
        assert_eq!(run.normalize(2), 2);
    }

    #[test]
    fn preorder_closure() {
        let mut frame = Frame::new(vec!["s0".into(), "s1".into(), "s2".into()], 1);
        let a = AgentId::new(1);
        frame.add_edge(a, 0, 1);
        frame.add_edge(a, 1, 2);
        frame.close_preorder();
        assert!(frame.related(a, 0, 0));
        assert!(frame.related(a, 0, 2));
        assert!(frame.related(a, 2, 2));
        assert!(!frame.related(a, 2, 0));
    }
}
