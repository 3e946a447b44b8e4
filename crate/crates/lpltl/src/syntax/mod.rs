//! The term and formula languages, their ASCII surface syntax, and
//! closure-set computation.
//!
//! Formulas are always kept in core form: the only connectives are `false`,
//! `->`, `X`, `U`, and `[t]_i`. The surface sugar (`~`, `&`, `|`, `<->`,
//! `true`, `F`, `G`) is expanded during parsing with the standard
//! abbreviations, e.g. `~p` is `p -> false` and `G p` is `~(true U ~p)`.

mod closure;
mod lexer;
mod parser;
mod print;

pub use closure::ClosureSet;
pub use parser::{parse_formula, parse_term, ParseError, ParseOptions};

use crate::SystemVariant;
use std::fmt;

/// A 1-based agent index. The number of agents `h` is fixed per session or
/// file header; validation against `h` happens at the parsing boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId(u32);

impl AgentId {
    pub fn new(index: u32) -> AgentId {
        assert!(index >= 1, "agent indices are 1-based");
        AgentId(index)
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A justification term.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    /// A justification constant; names start with `c`.
    Const(String),
    /// A justification variable; names start with `x`.
    Var(String),
    /// Positive introspection `!t`.
    Bang(Box<Term>),
    /// Evidence union `t + s`.
    Sum(Box<Term>, Box<Term>),
    /// Evidence application `t . s`.
    App(Box<Term>, Box<Term>),
    /// The star operator `*t`; star-extension variants only.
    Star(Box<Term>),
    /// `dn t`: makes box evidence accessible at every time point (experimental).
    Down(Box<Term>),
    /// `up t`: converts permanent evidence into evidence for a box.
    Up(Box<Term>),
    /// `rr t`: carries evidence one step forward in time (experimental).
    RArr(Box<Term>),
    /// `ll t`: presages evidence from the next time point (experimental).
    LArr(Box<Term>),
}

impl Term {
    pub fn constant(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }

    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn bang(self) -> Term {
        Term::Bang(Box::new(self))
    }

    pub fn sum(self, other: Term) -> Term {
        Term::Sum(Box::new(self), Box::new(other))
    }

    pub fn app(self, other: Term) -> Term {
        Term::App(Box::new(self), Box::new(other))
    }

    pub fn star(self) -> Term {
        Term::Star(Box::new(self))
    }

    pub fn up(self) -> Term {
        Term::Up(Box::new(self))
    }

    pub fn down(self) -> Term {
        Term::Down(Box::new(self))
    }

    pub fn rarr(self) -> Term {
        Term::RArr(Box::new(self))
    }

    pub fn larr(self) -> Term {
        Term::LArr(Box::new(self))
    }

    /// `*^n c` for a constant name.
    pub fn star_chain(name: impl Into<String>, n: usize) -> Term {
        let mut t = Term::constant(name);
        for _ in 0..n {
            t = t.star();
        }
        t
    }

    /// If the term is `*^n c` with `n >= 0`, returns `(n, c)`.
    pub fn as_star_chain(&self) -> Option<(usize, &str)> {
        match self {
            Term::Const(c) => Some((0, c)),
            Term::Star(inner) => inner.as_star_chain().map(|(n, c)| (n + 1, c)),
            _ => None,
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Term::Const(_) | Term::Var(_) => 1,
            Term::Bang(t)
            | Term::Star(t)
            | Term::Down(t)
            | Term::Up(t)
            | Term::RArr(t)
            | Term::LArr(t) => 1 + t.node_count(),
            Term::Sum(a, b) | Term::App(a, b) => 1 + a.node_count() + b.node_count(),
        }
    }

    /// Checks that every operator in the term is part of the variant's
    /// language. Returns the offending operator on failure.
    pub fn check_ops(
        &self,
        variant: SystemVariant,
        experimental: bool,
    ) -> Result<(), &'static str> {
        match self {
            Term::Const(_) | Term::Var(_) => Ok(()),
            Term::Bang(t) => t.check_ops(variant, experimental),
            Term::Sum(a, b) | Term::App(a, b) => {
                a.check_ops(variant, experimental)?;
                b.check_ops(variant, experimental)
            }
            Term::Star(t) => {
                if variant.allows_star() {
                    t.check_ops(variant, experimental)
                } else {
                    Err("*")
                }
            }
            Term::Up(t) => {
                if variant.allows_up() {
                    t.check_ops(variant, experimental)
                } else {
                    Err("up")
                }
            }
            Term::Down(t) => {
                if experimental {
                    t.check_ops(variant, experimental)
                } else {
                    Err("dn")
                }
            }
            Term::RArr(t) => {
                if experimental {
                    t.check_ops(variant, experimental)
                } else {
                    Err("rr")
                }
            }
            Term::LArr(t) => {
                if experimental {
                    t.check_ops(variant, experimental)
                } else {
                    Err("ll")
                }
            }
        }
    }
}

/// A formula in core form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Prop(String),
    Bottom,
    Implies(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    /// `[t]_i phi`: term `t` justifies agent `i`'s knowledge of `phi`.
    Just(Term, AgentId, Box<Formula>),
}

impl Formula {
    pub fn prop(name: impl Into<String>) -> Formula {
        Formula::Prop(name.into())
    }

    pub fn bottom() -> Formula {
        Formula::Bottom
    }

    pub fn implies(self, other: Formula) -> Formula {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    pub fn next(self) -> Formula {
        Formula::Next(Box::new(self))
    }

    pub fn until(self, other: Formula) -> Formula {
        Formula::Until(Box::new(self), Box::new(other))
    }

    pub fn just(term: Term, agent: AgentId, body: Formula) -> Formula {
        Formula::Just(term, agent, Box::new(body))
    }

    // The standard abbreviations. Everything below expands to core form.

    /// `~phi` is `phi -> false`.
    #[allow(clippy::should_implement_trait)] // logical sugar, not arithmetic negation
    pub fn neg(self) -> Formula {
        self.implies(Formula::Bottom)
    }

    /// `true` is `~false`.
    pub fn top() -> Formula {
        Formula::Bottom.neg()
    }

    /// `phi | psi` is `~phi -> psi`.
    pub fn or(self, other: Formula) -> Formula {
        self.neg().implies(other)
    }

    /// `phi & psi` is `~(~phi | ~psi)`.
    pub fn and(self, other: Formula) -> Formula {
        self.neg().or(other.neg()).neg()
    }

    /// `phi <-> psi` is `(phi -> psi) & (psi -> phi)`.
    pub fn iff(self, other: Formula) -> Formula {
        self.clone().implies(other.clone()).and(other.implies(self))
    }

    /// `F phi` is `true U phi`.
    pub fn eventually(self) -> Formula {
        Formula::top().until(self)
    }

    /// `G phi` is `~F ~phi`.
    pub fn always(self) -> Formula {
        self.neg().eventually().neg()
    }

    /// If the formula is `~phi`, returns `phi`.
    pub fn as_neg(&self) -> Option<&Formula> {
        match self {
            Formula::Implies(a, b) if **b == Formula::Bottom => Some(a),
            _ => None,
        }
    }

    /// If the formula is `G phi` in core encoding, returns `phi`.
    pub fn as_always(&self) -> Option<&Formula> {
        let inner = self.as_neg()?;
        if let Formula::Until(top, negated) = inner {
            if **top == Formula::top() {
                return negated.as_neg();
            }
        }
        None
    }

    /// If the formula is `F phi` in core encoding, returns `phi`.
    pub fn as_eventually(&self) -> Option<&Formula> {
        match self {
            Formula::Until(top, body) if **top == Formula::top() => Some(body),
            _ => None,
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Formula::Prop(_) | Formula::Bottom => 1,
            Formula::Implies(a, b) | Formula::Until(a, b) => 1 + a.node_count() + b.node_count(),
            Formula::Next(a) => 1 + a.node_count(),
            Formula::Just(t, _, a) => 1 + t.node_count() + a.node_count(),
        }
    }

    /// The largest agent index mentioned, 0 when there is none.
    pub fn max_agent(&self) -> u32 {
        match self {
            Formula::Prop(_) | Formula::Bottom => 0,
            Formula::Implies(a, b) | Formula::Until(a, b) => a.max_agent().max(b.max_agent()),
            Formula::Next(a) => a.max_agent(),
            Formula::Just(_, i, a) => i.get().max(a.max_agent()),
        }
    }

    /// Checks every term in the formula against the variant's term language.
    pub fn check_ops(
        &self,
        variant: SystemVariant,
        experimental: bool,
    ) -> Result<(), &'static str> {
        match self {
            Formula::Prop(_) | Formula::Bottom => Ok(()),
            Formula::Implies(a, b) | Formula::Until(a, b) => {
                a.check_ops(variant, experimental)?;
                b.check_ops(variant, experimental)
            }
            Formula::Next(a) => a.check_ops(variant, experimental),
            Formula::Just(t, _, a) => {
                t.check_ops(variant, experimental)?;
                a.check_ops(variant, experimental)
            }
        }
    }
}

/// The set of subformulas `Sub(chi)`, in first-occurrence pre-order.
pub fn subformulas(chi: &Formula) -> ClosureSet {
    let mut set = ClosureSet::new();
    collect_sub(chi, &mut set);
    set
}

fn collect_sub(phi: &Formula, set: &mut ClosureSet) {
    set.insert(phi.clone());
    match phi {
        Formula::Prop(_) | Formula::Bottom => {}
        Formula::Implies(a, b) | Formula::Until(a, b) => {
            collect_sub(a, set);
            collect_sub(b, set);
        }
        Formula::Next(a) => collect_sub(a, set),
        Formula::Just(_, _, a) => collect_sub(a, set),
    }
}

/// `Sub+(chi)`: the subformulas plus the negation of each subformula.
/// Negation means the `phi -> false` encoding; double negations are kept.
pub fn closure_plus(chi: &Formula) -> ClosureSet {
    let mut set = subformulas(chi);
    for phi in subformulas(chi).iter() {
        set.insert(phi.clone().neg());
    }
    set
}
