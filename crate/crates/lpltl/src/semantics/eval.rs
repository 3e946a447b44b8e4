//! The truth definition over interpreted systems.
//!
//! `eval` is the production evaluator: it resolves `U` by scanning at most
//! `period` positions ahead (beyond that, lasso states repeat with identical
//! futures) and the justification clause by quantifying over all runs and
//! their canonical positions. `brute_eval` is an independent oracle for
//! tests: it unrolls `X`/`U` literally to a horizon and evaluates the `F`/`G`
//! shapes by their derived clauses.

use super::evidence::EvalError;
use super::{InterpretedSystem, LassoRun};
use crate::syntax::Formula;

impl InterpretedSystem {
    /// Truth at `(run, n)`. Positions beyond the canonical range are
    /// normalized by loop arithmetic.
    pub fn eval(&self, run: &LassoRun, n: usize, phi: &Formula) -> Result<bool, EvalError> {
        let n = run.normalize(n);
        match phi {
            Formula::Prop(name) => Ok(self.valuation[run.state_at(n)].contains(name)),
            Formula::Bottom => Ok(false),
            Formula::Implies(a, b) => Ok(!self.eval(run, n, a)? || self.eval(run, n, b)?),
            Formula::Next(a) => self.eval(run, n + 1, a),
            Formula::Until(a, b) => {
                // the first position satisfying `b` (if any) occurs within
                // one period; a falsified `a` before that refutes the until
                for m in 0..=run.period() {
                    if self.eval(run, n + m, b)? {
                        return Ok(true);
                    }
                    if !self.eval(run, n + m, a)? {
                        return Ok(false);
                    }
                }
                Ok(false)
            }
            Formula::Just(term, agent, body) => {
                if !self.ev_member(*agent, run.state_at(n), term, body)? {
                    return Ok(false);
                }
                let here = run.state_at(n);
                for other in &self.runs {
                    for pos in 0..other.period() {
                        if self.frame.related(*agent, here, other.state_at(pos))
                            && !self.eval(other, pos, body)?
                        {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
        }
    }

    /// `I |= phi`: truth at every run and every canonical position.
    pub fn holds_everywhere(&self, phi: &Formula) -> Result<bool, EvalError> {
        for run in &self.runs {
            for n in 0..run.period() {
                if !self.eval(run, n, phi)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Differential oracle: `X` steps literally and each `U` (with the
    /// derived `F`/`G` shapes) unrolls a window of `horizon` positions from
    /// its own evaluation point, without position normalization. On a lasso,
    /// the first position satisfying the right argument of an until lies
    /// within one period of wherever the scan starts, so any
    /// `horizon >= 2 * period` makes every window exact at every nesting
    /// level.
    pub fn brute_eval(
        &self,
        run: &LassoRun,
        n: usize,
        phi: &Formula,
        horizon: usize,
    ) -> Result<bool, EvalError> {
        // G shape first: G a == ~(true U ~a), an implication at the root
        if let Some(inner) = phi.as_always() {
            for k in n..=n + horizon {
                if !self.brute_eval(run, k, inner, horizon)? {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        match phi {
            Formula::Prop(name) => Ok(self.valuation[run.state_at(n)].contains(name)),
            Formula::Bottom => Ok(false),
            Formula::Implies(a, b) => {
                Ok(!self.brute_eval(run, n, a, horizon)? || self.brute_eval(run, n, b, horizon)?)
            }
            Formula::Next(a) => self.brute_eval(run, n + 1, a, horizon),
            Formula::Until(a, b) => {
                if let Some(inner) = phi.as_eventually() {
                    for k in n..=n + horizon {
                        if self.brute_eval(run, k, inner, horizon)? {
                            return Ok(true);
                        }
                    }
                    return Ok(false);
                }
                // plain exists/forall reading of the until clause
                for m in n..=n + horizon {
                    if self.brute_eval(run, m, b, horizon)? {
                        let mut all = true;
                        for k in n..m {
                            if !self.brute_eval(run, k, a, horizon)? {
                                all = false;
                                break;
                            }
                        }
                        if all {
                            return Ok(true);
                        }
                    }
                }
                Ok(false)
            }
            Formula::Just(term, agent, body) => {
                if !self.ev_member(*agent, run.state_at(n), term, body)? {
                    return Ok(false);
                }
                let here = run.state_at(n);
                for other in &self.runs {
                    for pos in 0..other.period() {
                        if self.frame.related(*agent, here, other.state_at(pos))
                            && !self.brute_eval(other, pos, body, horizon)?
                        {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::ConstantSpecification;
    use crate::semantics::{EvidenceBase, Frame};
    use crate::syntax::{AgentId, Term};
    use crate::SystemVariant;
    use std::collections::BTreeSet;

    fn p() -> Formula {
        Formula::prop("P")
    }

    fn q() -> Formula {
        Formula::prop("Q")
    }

    fn i1() -> AgentId {
        AgentId::new(1)
    }

    /// One state s0 with P true, constant run.
    fn constant_p_system() -> InterpretedSystem {
        let mut frame = Frame::new(vec!["s0".into()], 2);
        frame.close_preorder();
        InterpretedSystem::new(
            frame,
            vec![LassoRun::new(vec![], vec![0])],
            EvidenceBase::new(),
            vec![[String::from("P")].into_iter().collect()],
            ConstantSpecification::finite(SystemVariant::Lpltl, []).unwrap(),
            SystemVariant::Lpltl,
        )
    }

    /// Two states: s0 (Q), s1 (P); run s0 . s1^omega.
    fn two_state_system() -> InterpretedSystem {
        let mut frame = Frame::new(vec!["s0".into(), "s1".into()], 2);
        frame.close_preorder();
        let val0: BTreeSet<String> = [String::from("Q")].into_iter().collect();
        let val1: BTreeSet<String> = [String::from("P")].into_iter().collect();
        InterpretedSystem::new(
            frame,
            vec![LassoRun::new(vec![0], vec![1])],
            EvidenceBase::new(),
            vec![val0, val1],
            ConstantSpecification::finite(SystemVariant::Lpltl, []).unwrap(),
            SystemVariant::Lpltl,
        )
    }

    #[test]
    fn always_on_constant_run() {
        let sys = constant_p_system();
        let run = sys.runs[0].clone();
        assert_eq!(sys.eval(&run, 0, &p().always()), Ok(true));
        assert_eq!(sys.brute_eval(&run, 0, &p().always(), 10), Ok(true));
    }

    #[test]
    fn justification_fails_without_evidence() {
        let sys = constant_p_system();
        let run = sys.runs[0].clone();
        let j = Formula::just(Term::var("x"), i1(), p());
        assert_eq!(sys.eval(&run, 0, &j), Ok(false));
    }

    #[test]
    fn until_scans_into_loop() {
        let sys = two_state_system();
        let run = sys.runs[0].clone();
        // Q U P at position 0: P arrives at position 1, Q holds before
        assert_eq!(sys.eval(&run, 0, &q().until(p())), Ok(true));
        // P U Q at position 1: Q never holds again
        assert_eq!(sys.eval(&run, 1, &p().until(q())), Ok(false));
        assert_eq!(sys.eval(&run, 0, &p().eventually()), Ok(true));
        assert_eq!(sys.eval(&run, 0, &p()), Ok(false));
    }

    #[test]
    fn holds_everywhere_examples() {
        let sys = two_state_system();
        assert_eq!(sys.holds_everywhere(&Formula::top()), Ok(true));
        assert_eq!(sys.holds_everywhere(&p().eventually()), Ok(true));
        assert_eq!(sys.holds_everywhere(&p()), Ok(false));
    }

    #[test]
    fn until_with_unreachable_goal_is_false_everywhere() {
        let sys = constant_p_system();
        let run = sys.runs[0].clone();
        for n in 0..4 {
            assert_eq!(sys.brute_eval(&run, n, &p().until(q()), 12), Ok(false));
            assert_eq!(sys.eval(&run, n, &p().until(q())), Ok(false));
        }
    }

    #[test]
    fn fun_and_until_unfolding_identities() {
        let sys = two_state_system();
        for run in &sys.runs {
            for n in 0..run.period() {
                let fun_lhs = sys.eval(run, n, &p().neg().next()).unwrap();
                let fun_rhs = sys.eval(run, n, &p().next().neg()).unwrap();
                assert_eq!(fun_lhs, fun_rhs);
                let u = p().until(q());
                let lhs = sys.eval(run, n, &u).unwrap();
                let rhs = sys
                    .eval(run, n, &q().or(p().and(u.clone().next())))
                    .unwrap();
                assert_eq!(lhs, rhs);
                // G by its definition ~(true U ~phi)
                let box_direct = sys.eval(run, n, &p().always()).unwrap();
                let box_def = sys
                    .eval(run, n, &Formula::top().until(p().neg()).neg())
                    .unwrap();
                assert_eq!(box_direct, box_def);
            }
        }
    }

    #[test]
    fn reflexivity_is_semantically_valid_here() {
        let axiom = p().implies(p());
        let cs = ConstantSpecification::finite(
            SystemVariant::Lpltl,
            [("c1".to_string(), i1(), axiom.clone())],
        )
        .unwrap();
        let mut frame = Frame::new(vec!["s0".into(), "s1".into()], 2);
        frame.close_preorder();
        let mut base = EvidenceBase::new();
        base.add(i1(), 0, Term::var("x"), p());
        let sys = InterpretedSystem::new(
            frame,
            vec![
                LassoRun::new(vec![], vec![0]),
                LassoRun::new(vec![], vec![1]),
            ],
            base,
            vec![
                [String::from("P")].into_iter().collect(),
                [String::from("P")].into_iter().collect(),
            ],
            cs,
            SystemVariant::Lpltl,
        );
        let j = Formula::just(Term::var("x"), i1(), p());
        assert_eq!(sys.holds_everywhere(&j.clone().implies(p())), Ok(true));
        // and the justification itself is true at s0
        assert_eq!(sys.eval(&sys.runs[0], 0, &j), Ok(true));
    }
}
