//! System validation: frame laws, run well-formedness, and spot checks of
//! the oracle's closure conditions over the declared seeds.

use std::fmt;

use super::{EvalError, InterpretedSystem};
use crate::syntax::{AgentId, Formula, Term};
use crate::SystemVariant;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyStates,
    NoRuns,
    RunStateOutOfRange {
        run: usize,
        state: usize,
    },
    NotReflexive {
        agent: AgentId,
        state: String,
    },
    NotTransitive {
        agent: AgentId,
        via: (String, String, String),
    },
    ValuationSizeMismatch {
        expected: usize,
        actual: usize,
    },
    SeedStateOutOfRange {
        state: usize,
    },
    OracleFailure {
        agent: AgentId,
        state: String,
        term: Term,
        formula: Formula,
        condition: &'static str,
    },
    OracleError {
        error: EvalError,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyStates => write!(f, "the state set is empty"),
            Violation::NoRuns => write!(f, "the run set is empty"),
            Violation::RunStateOutOfRange { run, state } => {
                write!(f, "run {run} mentions unknown state index {state}")
            }
            Violation::NotReflexive { agent, state } => {
                write!(f, "relation {agent} is missing the reflexive pair ({state},{state})")
            }
            Violation::NotTransitive { agent, via: (v, w, u) } => {
                write!(f, "relation {agent} has ({v},{w}) and ({w},{u}) but not ({v},{u})")
            }
            Violation::ValuationSizeMismatch { expected, actual } => {
                write!(f, "valuation covers {actual} states, frame has {expected}")
            }
            Violation::SeedStateOutOfRange { state } => {
                write!(f, "evidence seed mentions unknown state index {state}")
            }
            Violation::OracleFailure { agent, state, term, formula, condition } => write!(
                f,
                "evidence condition ({condition}) fails for agent {agent} at {state}: {formula} via {term}"
            ),
            Violation::OracleError { error } => write!(f, "evidence oracle error: {error}"),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            write!(f, "valid")
        } else {
            writeln!(f, "invalid ({} violations)", self.violations.len())?;
            for v in &self.violations {
                writeln!(f, "  - {v}")?;
            }
            Ok(())
        }
    }
}

impl InterpretedSystem {
    /// Checks frame reflexivity/transitivity, run well-formedness, and
    /// spot-checks the oracle's closure conditions on the finite seed
    /// support plus one-step derived facts.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.frame.num_states();
        if n == 0 {
            report.violations.push(Violation::EmptyStates);
            return report;
        }
        if self.runs.is_empty() {
            report.violations.push(Violation::NoRuns);
        }
        if self.valuation.len() != n {
            report.violations.push(Violation::ValuationSizeMismatch {
                expected: n,
                actual: self.valuation.len(),
            });
        }
        for (idx, run) in self.runs.iter().enumerate() {
            for &s in run.prefix.iter().chain(run.looping.iter()) {
                if s >= n {
                    report
                        .violations
                        .push(Violation::RunStateOutOfRange { run: idx, state: s });
                }
            }
        }
        for agent in 1..=self.frame.agents() {
            let agent = AgentId::new(agent);
            for s in 0..n {
                if !self.frame.related(agent, s, s) {
                    report.violations.push(Violation::NotReflexive {
                        agent,
                        state: self.frame.state_name(s).to_string(),
                    });
                }
            }
            for v in 0..n {
                for w in self.frame.successors(agent, v) {
                    for u in self.frame.successors(agent, w) {
                        if !self.frame.related(agent, v, u) {
                            report.violations.push(Violation::NotTransitive {
                                agent,
                                via: (
                                    self.frame.state_name(v).to_string(),
                                    self.frame.state_name(w).to_string(),
                                    self.frame.state_name(u).to_string(),
                                ),
                            });
                        }
                    }
                }
            }
        }
        for (_, state, _, _) in self.base.iter() {
            if state >= n {
                report
                    .violations
                    .push(Violation::SeedStateOutOfRange { state });
            }
        }
        if report.is_valid() {
            self.spot_check_oracle(&mut report);
        }
        report
    }

    fn spot_check_oracle(&self, report: &mut ValidationReport) {
        // collect the membership facts the closure conditions force,
        // then probe each one through the oracle
        let mut checks: Vec<(AgentId, usize, Term, Formula, &'static str)> = Vec::new();

        for (agent, state, term, phi) in self.base.iter() {
            if term.check_ops(self.variant, false).is_err()
                || phi.check_ops(self.variant, false).is_err()
            {
                continue; // seeds on unsupported operators are not probed
            }
            checks.push((agent, state, term.clone(), phi.clone(), "seed containment"));
            for w in self.frame.successors(agent, state) {
                checks.push((agent, w, term.clone(), phi.clone(), "monotonicity"));
            }
            // one-step positive introspection and sum
            let introspected = Formula::just(term.clone(), agent, phi.clone());
            checks.push((
                agent,
                state,
                term.clone().bang(),
                introspected,
                "positive introspection",
            ));
            checks.push((
                agent,
                state,
                term.clone().sum(Term::var("x")),
                phi.clone(),
                "sum",
            ));
        }

        for (constant, agent, phi) in self.cs.finite_entries() {
            if agent.get() > self.frame.agents() || phi.check_ops(self.variant, false).is_err() {
                continue;
            }
            let term = Term::constant(&constant);
            for state in 0..self.frame.num_states() {
                checks.push((
                    agent,
                    state,
                    term.clone(),
                    phi.clone(),
                    "constant specification",
                ));
            }
            if self.variant == SystemVariant::LpltlStar {
                let carried = Formula::just(term.clone(), agent, phi.clone()).always();
                checks.push((agent, 0, term.star(), carried, "star condition"));
            }
        }

        for (agent, state, term, phi, condition) in checks {
            match self.ev_member(agent, state, &term, &phi) {
                Ok(true) => {}
                Ok(false) => report.violations.push(Violation::OracleFailure {
                    agent,
                    state: self.frame.state_name(state).to_string(),
                    term,
                    formula: phi,
                    condition,
                }),
                Err(error) => {
                    report.violations.push(Violation::OracleError { error });
                    return;
                }
            }
        }
    }
}
